"""Kernel backend selection and shared numeric constants.

The heavy sums (heat traces, Dirichlet sums, lattice enumeration) exist twice:
jitted in ``_sum_numba`` and vectorized in ``_sum_numpy``. Selection order:

* ``WHKAE_BACKEND=numpy`` forces the pure-numpy path;
* ``WHKAE_BACKEND=numba`` (or unset) uses numba when it imports, numpy
  otherwise.

``WHKAE_THREADS`` caps worker parallelism for embarrassingly parallel outer
loops (grid sampling, quadrature nodes). Each individual sum is evaluated by
one worker in a fixed order, so results are independent of the thread count.
"""

from __future__ import annotations

import os

from .errors import DomainError

__all__ = [
    "impl",
    "backend_name",
    "rounding_bound",
    "thread_count",
    "EPS64",
]

EPS64 = 2.0**-53

_requested = os.environ.get("WHKAE_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise DomainError(f"WHKAE_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numpy":
    from . import _sum_numpy as impl
else:
    try:
        from . import _sum_numba as impl
    except ImportError:  # numba missing or broken; fall back silently
        from . import _sum_numpy as impl


def backend_name() -> str:
    """Name of the active kernel implementation ('numba' or 'numpy')."""
    return impl.BACKEND_NAME


def rounding_bound(n_terms: int, abs_sum: float) -> float:
    """Upper bound on the floating-point rounding error of a kernel sum.

    Covers per-term evaluation (exp/log/pow, a few ulp each) plus
    accumulation: O(1) for the compensated sequential path, O(log n) for
    numpy's pairwise reduction.
    """
    if n_terms <= 0:
        return 0.0
    import math

    if impl.SEQUENTIAL_COMPENSATED:
        c = 6.0
    else:
        c = 8.0 + math.log2(n_terms + 2)
    return c * EPS64 * abs_sum


def thread_count() -> int:
    """Worker cap from WHKAE_THREADS (>= 1; unset or invalid means 1)."""
    raw = os.environ.get("WHKAE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)
