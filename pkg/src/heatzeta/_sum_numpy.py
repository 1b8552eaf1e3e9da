"""Pure-numpy implementations of the hot summation kernels.

Fallback path for the numba kernels in ``_sum_numba``; selected through the
``WHKAE_BACKEND`` environment variable (see ``heatzeta.backend``). Every
function returns the running sum together with the sum of absolute terms so
callers can attach a floating-point rounding bound.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "numpy"

# numpy reduces with pairwise (blocked) summation; the rounding bound grows
# like log2(n) rather than the sequential-compensated constant.
SEQUENTIAL_COMPENSATED = False


def exp_weighted_sum(values, weights, t):
    """Sum of weights[i] * exp(-t * values[i]); returns (sum, abs_sum)."""
    terms = weights * np.exp(-t * values)
    return float(terms.sum()), float(np.abs(terms).sum())


def gauss_weighted_sum(values, weights, t):
    """Sum of weights[i] * exp(-(t * values[i])**2); returns (sum, abs_sum)."""
    x = t * values
    terms = weights * np.exp(-(x * x))
    return float(terms.sum()), float(np.abs(terms).sum())


def power_weighted_sum(values, weights, sr, si):
    """Sum of weights[i] * values[i]**(-(sr + i*si)) over values > 0.

    Returns (real, imag, abs_sum).
    """
    lg = np.log(values)
    mod = weights * np.exp(-sr * lg)
    phase = -si * lg
    re = mod * np.cos(phase)
    im = mod * np.sin(phase)
    return float(re.sum()), float(im.sum()), float(np.abs(mod).sum())


def theta_partial(power, u, mmax):
    """Sum of m**power * exp(-u * m*m) for m = 1..mmax; returns (sum, abs_sum)."""
    m = np.arange(1.0, float(mmax) + 0.5)
    terms = m**power * np.exp(-u * m * m)
    s = float(terms.sum())
    return s, s


def lattice_counts(kmax):
    """r2 counts: number of integer pairs (m, n) with m*m + n*n == k, k <= kmax."""
    counts = np.zeros(kmax + 1, dtype=np.int64)
    rmax = int(np.floor(np.sqrt(kmax)))
    while (rmax + 1) * (rmax + 1) <= kmax:
        rmax += 1
    for m in range(0, rmax + 1):
        m2 = m * m
        if m2 > kmax:
            break
        nmax = int(np.floor(np.sqrt(kmax - m2)))
        while (nmax + 1) * (nmax + 1) <= kmax - m2:
            nmax += 1
        n = np.arange(0, nmax + 1)
        ks = m2 + n * n
        w = np.full(n.shape, 2 if m > 0 else 1, dtype=np.int64)
        w[1:] *= 2  # n and -n
        np.add.at(counts, ks, w)
    return counts


def lattice_monomial_weights(kmax, a, b):
    """Shell sums of m**a * n**b over m*m + n*n == k, for k = 0..kmax."""
    out = np.zeros(kmax + 1, dtype=np.float64)
    rmax = int(np.floor(np.sqrt(kmax))) + 1
    for m in range(-rmax, rmax + 1):
        m2 = m * m
        if m2 > kmax:
            continue
        nmax = int(np.floor(np.sqrt(kmax - m2)))
        while (nmax + 1) * (nmax + 1) <= kmax - m2:
            nmax += 1
        n = np.arange(-nmax, nmax + 1)
        ks = m2 + n * n
        np.add.at(out, ks, float(m) ** a * n.astype(np.float64) ** b)
    return out


def warm_up():
    """No-op; numba twin uses this hook to trigger jit compilation."""
