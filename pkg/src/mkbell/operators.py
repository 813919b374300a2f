"""Local observables, their eigenbases, and the assembled global operator.

Matrix entries are half-integers, held as twice-entry integers until the
float conversion boundary.  All dyadic values at desk scale are exactly
representable in float64, so the two dense construction paths (pair
recursion vs. summed Kronecker products of the term expansion) can be
compared entrywise for exact equality.

Tensor index convention: party 1 is the most significant digit of the
mixed-radix global index.  This is fixed here and used everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from . import kernels
from .errors import CapExceeded, DimensionMismatch
from .expansion import TermExpansion, expand_terms
from .spincore import LABEL_B, ExactValue, Scenario, Spin, validate_labels

#: Default cap (rows) for materializing dense global operators.
DENSE_CAP = 1 << 13


@dataclass(frozen=True)
class LocalOperator:
    """A d x d observable with exact half-integer entries (stored doubled)."""

    spin: Spin
    twice_entries: np.ndarray  # int64, entries are 2 * value

    @property
    def matrix(self) -> np.ndarray:
        """Float64 matrix; exact, since all entries are half-integers."""
        return self.twice_entries.astype(np.float64) / 2.0


def make_A(spin: Spin) -> LocalOperator:
    """Diagonal observable diag(s, s-1, ..., -s); row 0 holds +s."""
    twice = np.diag(np.array(spin.twice_outcomes(), dtype=np.int64))
    return LocalOperator(spin, twice)


def make_B(spin: Spin) -> LocalOperator:
    """Anti-diagonal companion: entry (i, d-1-i) = s - min(i, d-1-i)."""
    d = spin.dimension
    twice = np.zeros((d, d), dtype=np.int64)
    for i in range(d):
        twice[i, d - 1 - i] = spin.twice_spin - 2 * min(i, d - 1 - i)
    return LocalOperator(spin, twice)


def b_eigenbasis(spin: Spin) -> list[tuple[ExactValue, np.ndarray]]:
    """Analytic eigenpairs of the anti-diagonal observable.

    Returned in descending eigenvalue order (s, s-1, ..., -s), so entry i is
    the eigenvector for outcome s - i.  For i < d-1-i the eigenvector is the
    symmetric combination (e_i + e_{d-1-i})/sqrt(2) with eigenvalue s - i;
    the mirrored index carries the antisymmetric combination with eigenvalue
    -(s - i); for integer s the middle index keeps e_mid with eigenvalue 0.
    """
    d = spin.dimension
    inv_sqrt2 = 1.0 / sqrt(2.0)
    pairs = []
    for i in range(d):
        mirror = d - 1 - i
        vec = np.zeros(d)
        if i < mirror:
            vec[i] = inv_sqrt2
            vec[mirror] = inv_sqrt2
        elif i > mirror:
            vec[mirror] = inv_sqrt2
            vec[i] = -inv_sqrt2
        else:
            vec[i] = 1.0
        pairs.append((ExactValue(spin.twice_spin - 2 * i, 1), vec))
    return pairs


def b_rotation(spin: Spin) -> np.ndarray:
    """Orthogonal matrix whose row i is the eigenvector for outcome s - i."""
    return np.vstack([vec for _, vec in b_eigenbasis(spin)])


def _labels_to_uint8(terms, n: int) -> np.ndarray:
    out = np.zeros((len(terms), n), dtype=np.uint8)
    for t, (_, labels) in enumerate(terms):
        for j, ch in enumerate(labels):
            out[t, j] = 1 if ch == LABEL_B else 0
    return out


@dataclass
class GlobalOperator:
    """The assembled n-party Bell operator, matrix-free with optional dense form.

    ``apply`` evaluates the operator term by term without materializing it;
    the two dense paths are retained as mutual oracles.
    """

    scenario: Scenario
    expansion: TermExpansion
    _coeffs: np.ndarray = field(repr=False)
    _labels: np.ndarray = field(repr=False)
    _diag_vals: np.ndarray = field(repr=False)
    _anti_vals: np.ndarray = field(repr=False)
    _dense: np.ndarray | None = field(default=None, repr=False)

    def apply(self, v: np.ndarray, pure=None) -> np.ndarray:
        """Matrix-free matvec M @ v."""
        v = np.ascontiguousarray(v, dtype=np.float64)
        if v.shape != (self.scenario.global_dimension(),):
            raise DimensionMismatch(
                f"expected vector of length {self.scenario.global_dimension()}, "
                f"got shape {v.shape}"
            )
        out = np.zeros_like(v)
        kernels.accumulate_terms(
            out, v, self._coeffs, self._labels, self._diag_vals, self._anti_vals,
            self.scenario.local_dimension, pure=pure,
        )
        return out

    def apply_term(self, labels: str, v: np.ndarray, pure=None) -> np.ndarray:
        """Matvec of a single unit-coefficient product term."""
        validate_labels(labels)
        v = np.ascontiguousarray(v, dtype=np.float64)
        if len(labels) != self.scenario.n or v.shape != (self.scenario.global_dimension(),):
            raise DimensionMismatch("term labels or vector do not match the scenario")
        out = np.zeros_like(v)
        kernels.accumulate_terms(
            out, v, np.ones(1), _labels_to_uint8([(1, labels)], self.scenario.n),
            self._diag_vals, self._anti_vals, self.scenario.local_dimension, pure=pure,
        )
        return out

    def dense(self) -> np.ndarray:
        """Dense symmetric matrix (recursion path), cached."""
        if self._dense is None:
            self._dense = assemble_dense(self.scenario)
        return self._dense

    def shift_bound(self) -> float:
        """Cheap upper bound on the spectral radius: sum_t |c_t| s**n."""
        s = self.scenario.spin.twice_spin / 2.0
        return self.expansion.coefficient_sum_abs() * s ** self.scenario.n


def global_operator(scenario: Scenario) -> GlobalOperator:
    expansion = expand_terms(scenario.n)
    spin = scenario.spin
    d = spin.dimension
    diag_vals = np.array(spin.twice_outcomes(), dtype=np.float64) / 2.0
    anti_vals = np.array(
        [spin.twice_spin - 2 * min(i, d - 1 - i) for i in range(d)], dtype=np.float64
    ) / 2.0
    coeffs = np.array([c for c, _ in expansion.terms], dtype=np.float64)
    labels = _labels_to_uint8(expansion.terms, scenario.n)
    return GlobalOperator(scenario, expansion, coeffs, labels, diag_vals, anti_vals)


def _check_dense_cap(scenario: Scenario, cap: int):
    if scenario.global_dimension() > cap:
        raise CapExceeded(
            f"dense assembly needs {scenario.global_dimension()} rows, cap is {cap}"
        )


def dense_scaled_recursive(scenario: Scenario, cap: int = DENSE_CAP) -> np.ndarray:
    """Integer matrix 2**n * M_n via the operator pair recursion."""
    _check_dense_cap(scenario, cap)
    a = make_A(scenario.spin).twice_entries
    b = make_B(scenario.spin).twice_entries
    m, k = a, b
    for _ in range(scenario.n - 1):
        m, k = (
            np.kron(m, a + b) + np.kron(k, a - b),
            np.kron(k, a + b) + np.kron(m, b - a),
        )
    return m


def dense_scaled_terms(scenario: Scenario, cap: int = DENSE_CAP) -> np.ndarray:
    """Integer matrix 2**n * M_n by summing term Kronecker products."""
    _check_dense_cap(scenario, cap)
    expansion = expand_terms(scenario.n)
    a = make_A(scenario.spin).twice_entries
    b = make_B(scenario.spin).twice_entries
    local = {0: a, 1: b}
    D = scenario.global_dimension()
    total = np.zeros((D, D), dtype=np.int64)
    for coeff, labels in expansion.terms:
        factor = np.array([[1]], dtype=np.int64)
        for ch in labels:
            factor = np.kron(factor, local[1 if ch == LABEL_B else 0])
        total += coeff * factor
    return total


def assemble_dense(scenario: Scenario, path: str = "recursion", cap: int = DENSE_CAP) -> np.ndarray:
    """Dense float64 M_n, exact (entries are dyadics on the 2**-n grid)."""
    if path == "recursion":
        scaled = dense_scaled_recursive(scenario, cap)
    elif path == "terms":
        scaled = dense_scaled_terms(scenario, cap)
    else:
        raise ValueError(f"unknown assembly path {path!r}")
    return scaled.astype(np.float64) / float(1 << scenario.n)


def term_matrix(scenario: Scenario, labels: str, cap: int = DENSE_CAP) -> np.ndarray:
    """Dense matrix of one product term O_1 x ... x O_n (unit coefficient)."""
    validate_labels(labels)
    if len(labels) != scenario.n:
        raise DimensionMismatch("term labels do not match the scenario")
    _check_dense_cap(scenario, cap)
    a = make_A(scenario.spin).twice_entries
    b = make_B(scenario.spin).twice_entries
    factor = np.array([[1]], dtype=np.int64)
    for ch in labels:
        factor = np.kron(factor, b if ch == LABEL_B else a)
    return factor.astype(np.float64) / float(1 << scenario.n)


@dataclass(frozen=True)
class CommutationReport:
    """Pairwise commutation of the expansion's term operators."""

    scenario: Scenario
    labels: tuple[str, ...]
    commuting: np.ndarray  # bool, (T, T)
    all_commute: bool


def commutation_report(scenario: Scenario, tol: float = 1e-12, cap: int = DENSE_CAP) -> CommutationReport:
    """Check every term pair for commutation (max-norm of the commutator)."""
    expansion = expand_terms(scenario.n)
    mats = [term_matrix(scenario, labels, cap) for _, labels in expansion.terms]
    T = len(mats)
    commuting = np.ones((T, T), dtype=bool)
    for i in range(T):
        for j in range(i + 1, T):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            ok = np.max(np.abs(comm)) < tol
            commuting[i, j] = commuting[j, i] = ok
    return CommutationReport(
        scenario=scenario,
        labels=tuple(labels for _, labels in expansion.terms),
        commuting=commuting,
        all_commute=bool(commuting.all()),
    )
