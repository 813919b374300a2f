"""Benchmark the compiled matvec kernel against the NumPy fallback.

Times the matrix-free operator product on a few scenario sizes and prints
the per-call timings and speedup.  Run from the repository root:

    python3 benchmarks/bench_apply.py
    python3 benchmarks/bench_apply.py --repeats 20 --cases 3,1 4,2 10,1
"""

import argparse
import time

import numpy as np

from mkbell import kernels
from mkbell.operators import global_operator
from mkbell.spincore import Scenario, Spin

DEFAULT_CASES = ["3,2", "4,2", "5,1", "6,2", "10,1", "4,7"]


def time_apply(op, v, pure, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        op.apply(v, pure=pure)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=10,
                        help="timing repeats per case (best is reported)")
    parser.add_argument("--cases", nargs="+", default=DEFAULT_CASES,
                        metavar="N,TWICE_S",
                        help="scenarios as n,2s pairs, e.g. 4,2 for n=4 s=1")
    args = parser.parse_args()

    if kernels.backend() != "compiled":
        print("warning: compiled extension unavailable; both columns use the fallback")
    print(f"{'n':>3} {'s':>5} {'dim':>8} {'terms':>6} "
          f"{'compiled':>12} {'pure':>12} {'speedup':>8}")
    for case in args.cases:
        n_text, twice_text = case.split(",")
        scenario = Scenario(int(n_text), Spin(int(twice_text)))
        op = global_operator(scenario)
        rng = np.random.default_rng(0)
        v = rng.standard_normal(scenario.global_dimension())
        op.apply(v)  # warm up
        fast = time_apply(op, v, pure=False, repeats=args.repeats)
        slow = time_apply(op, v, pure=True, repeats=args.repeats)
        print(f"{scenario.n:>3} {str(scenario.spin):>5} "
              f"{scenario.global_dimension():>8} {op.expansion.term_count:>6} "
              f"{fast * 1e3:>10.3f}ms {slow * 1e3:>10.3f}ms {slow / fast:>7.1f}x")


if __name__ == "__main__":
    main()
