"""Numba-jitted implementations of the hot summation kernels.

Same contracts as ``_sum_numpy``. Sums run sequentially with Neumaier
compensation, so the rounding bound is a small constant times machine epsilon
regardless of the number of terms, and results are bit-reproducible.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

BACKEND_NAME = "numba"
SEQUENTIAL_COMPENSATED = True


@njit(cache=True, nogil=True)
def exp_weighted_sum(values, weights, t):
    s = 0.0
    c = 0.0
    a = 0.0
    for i in range(values.shape[0]):
        x = weights[i] * math.exp(-t * values[i])
        tot = s + x
        if abs(s) >= abs(x):
            c += (s - tot) + x
        else:
            c += (x - tot) + s
        s = tot
        a += abs(x)
    return s + c, a


@njit(cache=True, nogil=True)
def gauss_weighted_sum(values, weights, t):
    s = 0.0
    c = 0.0
    a = 0.0
    for i in range(values.shape[0]):
        tv = t * values[i]
        x = weights[i] * math.exp(-(tv * tv))
        tot = s + x
        if abs(s) >= abs(x):
            c += (s - tot) + x
        else:
            c += (x - tot) + s
        s = tot
        a += abs(x)
    return s + c, a


@njit(cache=True, nogil=True)
def power_weighted_sum(values, weights, sr, si):
    sre = 0.0
    cre = 0.0
    sim = 0.0
    cim = 0.0
    a = 0.0
    for i in range(values.shape[0]):
        lg = math.log(values[i])
        mod = weights[i] * math.exp(-sr * lg)
        ph = -si * lg
        xr = mod * math.cos(ph)
        xi = mod * math.sin(ph)
        tot = sre + xr
        if abs(sre) >= abs(xr):
            cre += (sre - tot) + xr
        else:
            cre += (xr - tot) + sre
        sre = tot
        tot = sim + xi
        if abs(sim) >= abs(xi):
            cim += (sim - tot) + xi
        else:
            cim += (xi - tot) + sim
        sim = tot
        a += abs(mod)
    return sre + cre, sim + cim, a


@njit(cache=True, nogil=True)
def theta_partial(power, u, mmax):
    s = 0.0
    c = 0.0
    for m in range(1, mmax + 1):
        fm = float(m)
        x = fm**power * math.exp(-u * fm * fm)
        tot = s + x
        if abs(s) >= abs(x):
            c += (s - tot) + x
        else:
            c += (x - tot) + s
        s = tot
    out = s + c
    return out, out


@njit(cache=True, nogil=True)
def lattice_counts(kmax):
    counts = np.zeros(kmax + 1, dtype=np.int64)
    rmax = int(math.sqrt(kmax)) + 2
    for m in range(-rmax, rmax + 1):
        m2 = m * m
        if m2 > kmax:
            continue
        nmax = int(math.sqrt(kmax - m2)) + 2
        for n in range(-nmax, nmax + 1):
            k = m2 + n * n
            if k <= kmax:
                counts[k] += 1
    return counts


@njit(cache=True, nogil=True)
def lattice_monomial_weights(kmax, a, b):
    out = np.zeros(kmax + 1, dtype=np.float64)
    rmax = int(math.sqrt(kmax)) + 2
    for m in range(-rmax, rmax + 1):
        m2 = m * m
        if m2 > kmax:
            continue
        fm = float(m)
        wm = fm**a
        nmax = int(math.sqrt(kmax - m2)) + 2
        for n in range(-nmax, nmax + 1):
            k = m2 + n * n
            if k <= kmax:
                out[k] += wm * float(n) ** b
    return out


def warm_up():
    """Compile the kernels on tiny inputs so later timings are pure run time."""
    v = np.array([1.0, 2.0])
    w = np.array([1.0, 1.0])
    exp_weighted_sum(v, w, 0.5)
    gauss_weighted_sum(v, w, 0.5)
    power_weighted_sum(v, w, 2.0, 0.0)
    theta_partial(2, 1.0, 4)
    lattice_counts(8)
    lattice_monomial_weights(8, 2, 0)
