import pytest

from mkbell.expansion import (
    expand_terms,
    expected_term_count,
    mermin_klyshko_pair,
    swap_labels,
)

TWO_PARTY_TERMS = ((1, "AA"), (1, "AB"), (1, "BA"), (-1, "BB"))

# The two three-party companions; each is the A<->B mirror of the other.
THREE_PARTY_MAIN = ((2, "AAB"), (2, "ABA"), (2, "BAA"), (-2, "BBB"))
THREE_PARTY_COMPANION = ((-2, "AAA"), (2, "ABB"), (2, "BAB"), (2, "BBA"))


def test_single_party_base_case():
    e = expand_terms(1)
    assert e.terms == ((1, "A"),)
    assert e.companion == ((1, "B"),)


def test_two_party_terms():
    assert expand_terms(2).terms == TWO_PARTY_TERMS


def test_three_party_terms():
    e = expand_terms(3)
    assert e.terms == THREE_PARTY_MAIN
    assert e.companion == THREE_PARTY_COMPANION


@pytest.mark.parametrize("n", range(1, 11))
def test_term_count(n):
    e = expand_terms(n)
    assert e.term_count == expected_term_count(n) == 1 << (2 * (n // 2))
    assert len(e.companion) == e.term_count


@pytest.mark.parametrize("n", [3, 5, 7])
def test_odd_n_coefficients(n):
    e = expand_terms(n)
    assert e.term_count == 1 << (n - 1)
    magnitude = 1 << ((n - 1) // 2)
    assert all(abs(c) == magnitude for c, _ in e.terms)
    assert all(abs(c) == magnitude for c, _ in e.companion)


@pytest.mark.parametrize("n", range(1, 9))
def test_companion_is_label_swap(n):
    e = expand_terms(n)
    assert swap_labels(e.terms) == e.companion
    assert swap_labels(e.companion) == e.terms


@pytest.mark.parametrize("n", range(1, 9))
def test_terms_sorted_and_unique(n):
    e = expand_terms(n)
    labels = [lab for _, lab in e.terms]
    assert labels == sorted(labels)
    assert len(set(labels)) == len(labels)
    assert all(len(lab) == n for lab in labels)
    assert all(c != 0 for c, _ in e.terms)


def test_pair_recursion_step_consistency():
    # One unrolled step: M_3 must equal M_2 (A+B) + K_2 (A-B) termwise.
    m2, k2 = mermin_klyshko_pair(2)
    built = {}
    for lab, c in m2.items():
        built[lab + "A"] = built.get(lab + "A", 0) + c
        built[lab + "B"] = built.get(lab + "B", 0) + c
    for lab, c in k2.items():
        built[lab + "A"] = built.get(lab + "A", 0) + c
        built[lab + "B"] = built.get(lab + "B", 0) - c
    built = {lab: c for lab, c in built.items() if c}
    m3, _ = mermin_klyshko_pair(3)
    assert built == m3
