"""Timing comparison of the numba and numpy summation backends.

Runs each hot kernel on identical inputs through both implementations and
prints a table of per-call times and the speed ratio. Invoke as

    python benchmarks/bench_kernels.py [--n 2000000] [--repeat 5]

The numba twin is warmed up first so jit compilation never lands in a timed
region.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from heatzeta import _sum_numpy

try:
    from heatzeta import _sum_numba
except ImportError:
    _sum_numba = None


def _time(fn, args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2_000_000, help="terms per sum")
    ap.add_argument("--repeat", type=int, default=5, help="timing repetitions")
    args = ap.parse_args()

    n = args.n
    values = np.arange(n, dtype=np.float64)
    weights = np.ones(n, dtype=np.float64)
    pos = values[1:]
    kmax = 250_000

    cases = [
        ("exp_weighted_sum", "exp_weighted_sum", (values, weights, 1e-5)),
        ("gauss_weighted_sum", "gauss_weighted_sum", (values, weights, 1e-4)),
        ("power_weighted_sum", "power_weighted_sum", (pos, weights[1:], 3.0, 0.5)),
        ("theta_partial", "theta_partial", (2, 1e-9, n)),
        ("lattice_counts", "lattice_counts", (kmax,)),
        ("lattice_monomial_weights", "lattice_monomial_weights", (kmax, 2, 0)),
    ]

    if _sum_numba is not None:
        _sum_numba.warm_up()

    print(f"{'kernel':<26} {'numpy [ms]':>12} {'numba [ms]':>12} {'ratio':>8}")
    for label, name, call_args in cases:
        t_np = _time(getattr(_sum_numpy, name), call_args, args.repeat)
        if _sum_numba is None:
            print(f"{label:<26} {1e3 * t_np:>12.2f} {'n/a':>12} {'n/a':>8}")
            continue
        t_nb = _time(getattr(_sum_numba, name), call_args, args.repeat)
        ratio = t_np / t_nb if t_nb > 0 else float("inf")
        print(f"{label:<26} {1e3 * t_np:>12.2f} {1e3 * t_nb:>12.2f} {ratio:>8.2f}")

    check = [
        _sum_numpy.exp_weighted_sum(values[:1000], weights[:1000], 0.01)[0],
    ]
    if _sum_numba is not None:
        check.append(_sum_numba.exp_weighted_sum(values[:1000], weights[:1000], 0.01)[0])
        spread = abs(check[0] - check[1])
        print(f"\nbackend agreement on a 1000-term probe: |diff| = {spread:.3e}")


if __name__ == "__main__":
    main()
