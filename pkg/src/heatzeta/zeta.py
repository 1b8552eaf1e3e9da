"""Meromorphic continuation of spectral zeta functions.

zeta_b(s) = sum over the positive spectrum of weight(v) * v**(-s) converges
for Re s > p + degree(b). Past that line it is continued through a split
Mellin transform of the kernel-adjusted heat trace: with
psi(t) = t**p * Tr(b exp(-t|D'|)) = sum_r a_r t**r + remainder,

  Gamma(s) * zeta_adj(s) = sum_{r<=N} a_r T0**(s+r-p) / (s+r-p)
                           + int_0^T0 (psi(t) - sum_{r<=N} a_r t**r) t**(s-p-1) dt
                           + int_T0^inf psi(t) t**(s-p-1) dt.

The bracket is analytic apart from the explicit denominators, so poles,
residues and special values are read off the expansion coefficients. The
adjusted operator moves kernel states to value 1; their contribution is the
exact constant Tr(P b P) * 1**(-s), subtracted at the end. The identity holds
for *any* coefficient vector a_r (fit errors cancel between the sum and the
subtracted integrand), which is what makes the split-point independence check
meaningful for fitted models.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import expansion as xp
from .backend import EPS64, impl, rounding_bound
from .errors import (
    DomainError,
    GammaPoleError,
    MissingZetaValueError,
    PoleProximityError,
    ResourceBudgetError,
)
from .spectrum import (
    Observable,
    SpectralModel,
    identity_observable,
    kernel_adjust,
    level_weight,
)
from .trace import (
    DEFAULT_MAX_LEVELS,
    absolute_trace_bound,
    heat_trace,
    trace_expansion,
)

__all__ = [
    "gamma",
    "ZetaValue",
    "ZetaData",
    "zeta_direct",
    "zeta_continued",
    "poles_and_residues",
    "zeta_data",
    "residue_by_extrapolation",
    "dprime_zeta_evaluator",
    "gauss_to_exp",
]


# ---------------------------------------------------------------------------
# gamma function

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos_half(s: complex) -> complex:
    # valid for Re s >= 0.5
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (s - 1.0 + i)
    t = s + _LANCZOS_G - 0.5
    return math.sqrt(2.0 * math.pi) * t ** (s - 0.5) * cmath.exp(-t) * x


def gamma(s) -> complex:
    """Gamma(s) for complex s, relative error around 1e-13 for |Im s| < 50.

    Lanczos sum on the right half plane, reflection formula on the left;
    nonpositive integers raise a typed GammaPoleError.
    """
    s = complex(s)
    if s.imag == 0.0 and s.real <= 0.0 and s.real == int(s.real):
        raise GammaPoleError(f"gamma has a pole at s = {int(s.real)}")
    if s.real < 0.5:
        # Gamma(s) Gamma(1-s) = pi / sin(pi s)
        return math.pi / (cmath.sin(math.pi * s) * _lanczos_half(1.0 - s))
    return _lanczos_half(s)


_GAMMA_REL = 1e-13


# ---------------------------------------------------------------------------
# results

@dataclass(frozen=True)
class ZetaValue:
    """One zeta evaluation: value with certified absolute error and method."""

    s: complex
    value: complex
    abs_error: float
    method: str
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def real(self) -> float:
        return self.value.real


@dataclass
class ZetaData:
    """Pole structure of one zeta function.

    ``poles`` maps pole location (integer, or Fraction for fractional p) to
    its residue; residues are Fractions on the rational backend (dropped when
    exactly zero) and FloatCoeff value/error pairs otherwise.
    ``kernel_weight`` is the subtracted constant Tr(P b P) (the kernel
    dimension for the identity observable). ``evaluator``, when set, maps s
    to a ZetaValue by meromorphic continuation.
    """

    p: Fraction
    poles: dict
    value_at_zero: object
    kernel_weight: object
    evaluator: object = None
    meta: dict = field(default_factory=dict)

    def residue(self, k):
        return self.poles.get(k, Fraction(0))

    def to_json_dict(self) -> dict:
        def num(c):
            if isinstance(c, Fraction):
                return {"num": c.numerator, "den": c.denominator, "exact": True}
            if isinstance(c, xp.FloatCoeff):
                return {"val": c.val, "err": c.err}
            return {"val": float(c), "err": 0.0, "exact": True}

        return {
            "p": {"num": self.p.numerator, "den": self.p.denominator},
            "poles": {str(k): num(v) for k, v in sorted(self.poles.items())},
            "zeta_at_zero": num(self.value_at_zero),
            "kernel_weight": num(self.kernel_weight),
        }


# ---------------------------------------------------------------------------
# direct summation

def zeta_direct(
    model: SpectralModel,
    obs: Observable | None = None,
    s=2.0,
    eps: float = 1e-10,
    max_levels: int = DEFAULT_MAX_LEVELS,
) -> ZetaValue:
    """sum w(v) v**(-s) over the positive spectrum, certified by an Abel tail.

    Only valid safely inside the convergence region: requires
    Re s > p + degree + 0.25. The tail over values > V is bounded through the
    counting envelope S(V) <= C_tot (1+V)**M <= C_tot 2**M V**M (V >= 1) by
    sigma * C_tot * 2**M * V**(M - sigma) / (sigma - M).
    """
    if obs is None:
        obs = identity_observable()
    base = model.unadjusted
    s = complex(s)
    sigma = s.real
    m_exp = obs.degree + float(base.p)
    if sigma <= m_exp + 0.25:
        raise DomainError(
            f"direct summation needs Re s > p + degree + 0.25 = {m_exp + 0.25:g} "
            f"(got {sigma:g}); use zeta_continued"
        )
    c_tot = obs.bound_constant * base.counting_constant
    tail_c = sigma * c_tot * 2.0**m_exp / (sigma - m_exp)

    level_cap = base.flags.get("level_count")
    V = 16.0
    while True:
        count = int(V * V) + 2 if base.level_kind == "lattice" else int(V) + 2
        if level_cap is not None:
            count = min(count, level_cap)
        stuck = count >= max_levels or (level_cap is not None and count == level_cap)
        count = min(count, max_levels)
        values, _, _ = base.levels(count)
        if stuck:
            V = max(float(values[-1]), 2.0)
        tail = tail_c * V ** (m_exp - sigma)
        if tail <= eps / 2.0 or stuck:
            start = int(np.searchsorted(values, 0.0, side="right"))
            wp, wm = obs.weights(base, count)
            w = wp + wm
            re, im, abs_s = impl.power_weighted_sum(
                values[start:count], w[start:count], sigma, s.imag
            )
            err = tail + 1.5 * rounding_bound(count, abs_s)
            if tail <= eps / 2.0:
                return ZetaValue(
                    s, complex(re, im), err, "direct", {"cutoff": V, "levels": count}
                )
            raise ResourceBudgetError(
                f"direct tail bound {tail:.3e} stuck above eps={eps:g} for "
                f"{base.name} at s={s} with {count} levels",
                achieved_bound=err,
            )
        V *= 2.0


# ---------------------------------------------------------------------------
# continuation helpers

def _cpow(base: float, z: complex) -> complex:
    return cmath.exp(z * math.log(base))


_LEG_CACHE: dict = {}


def _leg_nodes(n: int):
    if n not in _LEG_CACHE:
        _LEG_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _LEG_CACHE[n]


def _coeff_pairs(expansion: xp.LaurentExpansion, top: int):
    """(r, value, error) floats for powers leading..top, padding BAO zeros."""
    out = []
    for r in range(expansion.leading_order, top + 1):
        c = expansion.coeff(r)
        if isinstance(c, Fraction):
            v = float(c)
            out.append((r, v, abs(v) * EPS64))
        else:
            out.append((r, c.val, c.err + abs(c.val) * EPS64))
    return out


def _psi(model: SpectralModel, obs: Observable, t: float, pf: float, max_levels: int):
    """t**p * heat trace at t, with error bound; memoized on the model."""
    cache = model.flags.setdefault("_psi_cache", {})
    key = (obs.name, t)
    hit = cache.get(key)
    if hit is None:
        sample = heat_trace(model, obs, t, kernel="exp", eps=None, max_levels=max_levels)
        tp = t**pf
        val = sample.value * tp
        hit = (val, sample.abs_error * tp + 2.0 * EPS64 * abs(val))
        cache[key] = hit
    return hit


def _panel_integral(f, a: float, b: float):
    """Gauss-Legendre value of int_a^b f with a 12-vs-24 node error estimate.

    f(t) -> (complex integrand value, nonnegative pointwise error bound)."""
    h = 0.5 * (b - a)
    c = 0.5 * (b + a)
    vals = {}
    for n in (24, 12):
        x, w = _leg_nodes(n)
        acc = 0.0 + 0.0j
        errs = 0.0
        for xi, wi in zip(x.tolist(), w.tolist()):
            fv, fe = f(c + h * xi)
            acc += wi * fv
            errs += wi * fe
        vals[n] = (h * acc, h * errs)
    i24, e24 = vals[24]
    i12, _ = vals[12]
    return i24, e24 + abs(i24 - i12)


def _kernel_weight(model: SpectralModel, obs: Observable):
    """Tr(P b P): observable weight on the kernel, before adjustment."""
    base = model.unadjusted
    if base.kernel_dim == 0:
        return 0
    wp0, wm0 = level_weight(base, obs, 0)
    w = wp0 + wm0
    return int(w) if float(w).is_integer() else w


def zeta_continued(
    model: SpectralModel,
    obs: Observable | None = None,
    s=0.0,
    eps: float = 1e-9,
    order: int | None = None,
    split: float = 1.0,
    pole_guard: float = 1e-3,
    max_levels: int = DEFAULT_MAX_LEVELS,
) -> ZetaValue:
    """Meromorphic continuation of zeta_b(s) = Tr(b |D|^(-s)), kernel excluded.

    At s = 0, -1, -2, ... the limit is taken exactly through the expansion
    coefficients: zeta_b(-m) = (-1)**m m! a_(p+m) - Tr(PbP) for integer p
    (only the -Tr(PbP) term survives for fractional p). Elsewhere the split
    Mellin bracket is assembled at the boundary t = ``split`` and divided by
    Gamma(s); evaluation within ``pole_guard`` of a pole location p - r > 0
    raises PoleProximityError. The error bound combines coefficient errors
    (amplified near poles), quadrature estimates, certified trace tails and
    the estimated small-t cutoff remainder.
    """
    if obs is None:
        obs = identity_observable()
    if not split > 0:
        raise DomainError("split point must be positive")
    s = complex(s)
    sigma = s.real
    p = model.p
    pf = float(p)
    adj = model if model.adjusted or model.unadjusted.kernel_dim == 0 else kernel_adjust(model)
    w0 = _kernel_weight(model, obs)

    # exact limits at nonpositive integers
    if s.imag == 0.0 and sigma <= 0.0 and sigma == int(sigma):
        m = int(-sigma)
        if p.denominator != 1:
            val = -w0 if isinstance(w0, int) else -float(w0)
            return ZetaValue(
                s, complex(float(val)), 0.0, "exact-limit", {"exact": True, "value": val}
            )
        n_exact = max(adj.p_floor + 2, int(p) + m)
        expansion = trace_expansion(adj, obs, "exp", order=n_exact, max_levels=max_levels)
        a = expansion.coeff(int(p) + m)
        sign = -1 if m % 2 else 1
        fact = math.factorial(m)
        if isinstance(a, Fraction):
            exact = sign * fact * a - Fraction(w0) if isinstance(w0, int) else None
            if exact is not None:
                return ZetaValue(
                    s, complex(float(exact)), abs(float(exact)) * 4 * EPS64,
                    "exact-limit", {"exact": True, "value": exact},
                )
            a = xp.FloatCoeff(float(a), abs(float(a)) * EPS64)
        val = sign * fact * a.val - float(w0)
        return ZetaValue(
            s, complex(val), fact * a.err + 4 * EPS64 * abs(val), "exact-limit", {}
        )

    # order selection: convergence of the subtracted integral needs
    # order + 1 + sigma - p > 0 with margin
    default_n = adj.p_floor + (2 if adj.flags.get("fit_grid") else 3)
    needed_n = int(math.floor(pf - sigma)) + 2
    n = max(default_n, needed_n) if order is None else order
    if n + 1 + sigma - pf <= 0.25:
        raise DomainError(
            f"order {n} too small for Re s = {sigma:g} (needs order > {pf - sigma - 1:g})"
        )

    expansion = trace_expansion(adj, obs, "exp", order=n, max_levels=max_levels)
    if expansion.remainder == xp.POWER and expansion.truncation_order < n:
        n = expansion.truncation_order
        if n + 1 + sigma - pf <= 0.25:
            raise DomainError("available expansion order too small for this s")
    pairs = _coeff_pairs(expansion, n)

    # pole guard on candidate locations p - r
    for r, c_val, _ in pairs:
        sp = pf - r
        if sp > 0.0 and abs(s - sp) < pole_guard:
            raise PoleProximityError(
                f"s = {s} within {pole_guard:g} of the pole candidate at {sp:g}; "
                f"use poles_and_residues or residue_by_extrapolation"
            )

    t0 = float(split)

    # shared integrand machinery; coefficient errors are accounted once, in
    # the A-term below, via the exact cancellation between the first sum and
    # the subtracted integrand (see module docstring)
    def remainder(t: float):
        val, verr = _psi(adj, obs, t, pf, max_levels)
        poly = 0.0
        poly_abs = 0.0
        for r, c_val, _ in pairs:
            term = c_val * t**r
            poly += term
            poly_abs += abs(term)
        res = val - poly
        return res, verr + (poly_abs + abs(res)) * (len(pairs) + 3) * EPS64

    def subtracted(t: float):
        res, rerr = remainder(t)
        wt = _cpow(t, s - pf - 1.0)
        return res * wt, rerr * abs(wt)

    def plain(t: float):
        val, verr = _psi(adj, obs, t, pf, max_levels)
        wt = _cpow(t, s - pf - 1.0)
        return val * wt, verr * abs(wt)

    # small-t cutoff eta: bound int_0^eta |R| t^(sigma-p-1) dt empirically by
    # 2 max(|R(eta)|, 2^(n+1) |R(eta/2)|) eta^(sigma-p) / pw, assuming the
    # remainder keeps its observed t^(n+1) decay below the probe; for fitted
    # coefficients the decay bottoms out at the fit-error plateau, so stop
    # shrinking eta once the estimate stops improving
    pw = n + 1.0 + sigma - pf

    def small_cut(et: float) -> float:
        r1, e1 = remainder(et)
        r2, e2 = remainder(et / 2.0)
        mag = max(abs(r1) + e1, (abs(r2) + e2) * 2.0 ** (n + 1))
        return 2.0 * mag * et ** (sigma - pf) / pw

    eta_floor = 2.0**-7 if adj.level_kind == "lattice" else 2.0**-12
    budget = eps / 4.0
    eta = min(t0, 1.0) / 2.0
    small_rem = small_cut(eta)
    while small_rem > budget and eta > eta_floor:
        cand = small_cut(eta / 2.0)
        if cand >= small_rem * 0.9:
            break
        eta /= 2.0
        small_rem = cand

    # A: the explicit pole part; the per-coefficient error enters through
    # eta**(s+r-p)/(s+r-p), the exact difference the wrong coefficient makes
    a_sum = 0.0 + 0.0j
    a_err = 0.0
    for r, c_val, c_err in pairs:
        denom = s + (r - pf)
        tpow = _cpow(t0, denom)
        term = c_val * tpow / denom
        a_sum += term
        a_err += (c_err * eta ** (sigma + r - pf) + 2.0 * EPS64 * abs(c_val * tpow)) / abs(denom)

    # B: subtracted integral over [eta, t0] on doubling panels
    bounds = [t0]
    while bounds[-1] / 2.0 > eta * (1.0 + 1e-12):
        bounds.append(bounds[-1] / 2.0)
    if eta < bounds[-1] * (1.0 - 1e-12):
        bounds.append(eta)
    bounds.reverse()
    b_sum = 0.0 + 0.0j
    b_err = small_rem
    for a_b, b_b in zip(bounds, bounds[1:]):
        iv, ie = _panel_integral(subtracted, a_b, b_b)
        b_sum += iv
        b_err += ie

    # C: large-t integral over [t0, T] with a certified exponential tail
    lam = adj.min_positive_value
    c_sum = 0.0 + 0.0j
    c_err = 0.0
    t_cur = t0
    while True:
        phi_abs = absolute_trace_bound(adj, obs, t_cur, "exp", max_levels)
        if sigma <= 1.0:
            tail = phi_abs * t_cur ** (sigma - 1.0) / lam
            valid = True
        else:
            tail = 2.0 * phi_abs * t_cur ** (sigma - 1.0) / lam
            valid = t_cur >= 2.0 * (sigma - 1.0) / lam
        if valid and tail <= eps / 4.0:
            c_err += tail
            break
        iv, ie = _panel_integral(plain, t_cur, 2.0 * t_cur)
        c_sum += iv
        c_err += ie
        t_cur *= 2.0
        if t_cur > t0 * 2.0**40:
            raise ResourceBudgetError(
                "large-t tail failed to certify", achieved_bound=tail
            )

    bracket = a_sum + b_sum + c_sum
    bracket_err = a_err + b_err + c_err
    g = gamma(s)
    val = bracket / g - float(w0)
    err = (
        bracket_err / abs(g)
        + abs(bracket / g) * _GAMMA_REL
        + 4.0 * EPS64 * (abs(val) + abs(float(w0)))
    )
    return ZetaValue(
        s,
        val,
        err,
        "continued",
        {
            "split": t0,
            "order": n,
            "eta": eta,
            "tail_to": t_cur,
            "expansion_source": (expansion.meta or {}).get("source"),
            "met": err <= eps,
        },
    )


# ---------------------------------------------------------------------------
# pole structure

def poles_and_residues(
    expansion: xp.LaurentExpansion,
    p,
    kernel_weight=0,
    evaluator=None,
) -> ZetaData:
    """Read the pole structure of zeta_b off the heat coefficients.

    The pole at s = p - r (when positive, or non-integer) carries residue
    a_r / Gamma(p - r); nonpositive integer locations are regular because
    1/Gamma vanishes there, and instead feed the special values
    zeta_b(0) = a_p - kernel_weight (integer p). Rational coefficients give
    exact rational residues at integer locations; residues that are exactly
    zero are dropped.
    """
    p = Fraction(p)
    poles: dict = {}
    value_at_zero = None
    for idx, c in enumerate(expansion.coeffs):
        r = expansion.leading_order + idx
        sp = p - r
        if sp == 0:
            continue  # handled below through coeff(p)
        if sp < 0 and sp.denominator == 1:
            continue  # regular point: 1/Gamma kills the bracket pole
        if sp.denominator == 1:
            k = int(sp)
            g_fact = math.factorial(k - 1)
            if isinstance(c, Fraction):
                if c != 0:
                    poles[k] = c / g_fact
            else:
                poles[k] = xp.FloatCoeff(c.val / g_fact, c.err / g_fact)
        else:
            g = gamma(float(sp)).real
            if isinstance(c, Fraction):
                c = xp.FloatCoeff(float(c), abs(float(c)) * EPS64)
            if c.val != 0.0 or c.err != 0.0:
                poles[sp] = xp.FloatCoeff(
                    c.val / g, c.err / abs(g) + abs(c.val / g) * _GAMMA_REL
                )

    if p.denominator == 1:
        r0 = int(p)
        if expansion.remainder == xp.POWER and r0 > expansion.truncation_order:
            raise DomainError(
                f"expansion must reach t**{r0} to determine the value at zero"
            )
        a_p = expansion.coeff(r0)
        if isinstance(a_p, Fraction) and isinstance(kernel_weight, int):
            value_at_zero = a_p - kernel_weight
        else:
            av = float(a_p) if isinstance(a_p, Fraction) else a_p.val
            ae = 0.0 if isinstance(a_p, Fraction) else a_p.err
            value_at_zero = xp.FloatCoeff(av - float(kernel_weight), ae)
    else:
        value_at_zero = (
            -Fraction(kernel_weight)
            if isinstance(kernel_weight, int)
            else xp.FloatCoeff(-float(kernel_weight), 0.0)
        )

    return ZetaData(
        p=p,
        poles=poles,
        value_at_zero=value_at_zero,
        kernel_weight=kernel_weight,
        evaluator=evaluator,
        meta={"expansion_source": (expansion.meta or {}).get("source")},
    )


def zeta_data(
    model: SpectralModel,
    obs: Observable | None = None,
    order: int | None = None,
    eps: float = 1e-9,
    max_levels: int = DEFAULT_MAX_LEVELS,
) -> ZetaData:
    """Pole structure of zeta_b for a model, with a continuation evaluator."""
    if obs is None:
        obs = identity_observable()
    adj = model if model.adjusted or model.unadjusted.kernel_dim == 0 else kernel_adjust(model)
    n = order if order is not None else adj.p_floor + (2 if adj.flags.get("fit_grid") else 3)
    expansion = trace_expansion(adj, obs, "exp", order=n, max_levels=max_levels)
    w0 = _kernel_weight(model, obs)

    def evaluator(s, **kw):
        kw.setdefault("eps", eps)
        kw.setdefault("max_levels", max_levels)
        return zeta_continued(model, obs, s, **kw)

    data = poles_and_residues(expansion, model.p, w0, evaluator)
    data.meta["model"] = model.name
    data.meta["observable"] = obs.name
    return data


def residue_by_extrapolation(
    model: SpectralModel,
    obs: Observable | None = None,
    k=1,
    deltas=(1e-2, 1e-3, 1e-4),
    eps: float = 1e-10,
    pole_guard: float = 1e-5,
    **kwargs,
) -> tuple[float, float]:
    """Residue at s = k from near-pole samples of the continuation.

    Evaluates (s - k) * zeta(s) at s = k + delta for each delta and
    extrapolates delta -> 0 with Neville's scheme; returns (value, error
    estimate) where the estimate combines the last tableau correction with
    the propagated evaluation error bounds.
    """
    kf = float(k)
    xs = list(deltas)
    fs = []
    es = []
    for d in xs:
        zv = zeta_continued(
            model, obs, s=kf + d, eps=eps, pole_guard=pole_guard, **kwargs
        )
        fs.append(d * zv.value.real)
        es.append(d * zv.abs_error)

    def neville_at_zero(nodes, vals):
        tab = list(vals)
        for lvl in range(1, len(nodes)):
            tab = [
                (nodes[j + lvl] * tab[j] - nodes[j] * tab[j + 1])
                / (nodes[j + lvl] - nodes[j])
                for j in range(len(tab) - 1)
            ]
        return tab[0]

    full = neville_at_zero(xs, fs)
    reduced = neville_at_zero(xs[1:], fs[1:]) if len(xs) > 2 else fs[-1]
    # Lagrange weights at 0 propagate the sample error bounds
    lam = []
    for j in range(len(xs)):
        w = 1.0
        for i in range(len(xs)):
            if i != j:
                w *= (0.0 - xs[i]) / (xs[j] - xs[i])
        lam.append(abs(w))
    est = abs(full - reduced) + sum(l * e for l, e in zip(lam, es))
    return full, est


def dprime_zeta_evaluator(model: SpectralModel, obs: Observable | None = None, **kwargs):
    """Evaluator m -> zeta of the adjusted operator at s = -m (kernel included).

    This is the convention gauss_to_exp needs at odd negative integers:
    zeta_adj(-m) = zeta_b(-m) + Tr(PbP) * 1**m."""
    if obs is None:
        obs = identity_observable()
    w0 = float(_kernel_weight(model, obs))

    def ev(m: int):
        zv = zeta_continued(model, obs, s=-float(m), **kwargs)
        return zv.value.real + w0, zv.abs_error

    return ev


# ---------------------------------------------------------------------------
# Gaussian -> exponential conversion

def gauss_to_exp(
    gauss_expansion: xp.LaurentExpansion,
    p,
    zeta_evaluator=None,
    order: int | None = None,
) -> xp.LaurentExpansion:
    """Convert Gaussian-kernel heat coefficients to exponential-kernel ones.

    Matching residues of Gamma(s) zeta(s) against (1/2) Gamma(s/2) zeta(s)
    gives, with u = p - r and zeta the kernel-included zeta of the adjusted
    operator,

      a_r = 2 Gamma(u) g_r / Gamma(u/2)            u > 0 or u non-integer,
      a_r = (-1)^(m/2) (m/2)! g_r / m!             u = -m <= 0, m even,
      a_r = -zeta(-m) / m!                         u = -m < 0, m odd,

    so odd negative integers need externally supplied zeta values:
    ``zeta_evaluator(m)`` must return zeta_adj(-m) (or a (value, error)
    pair). Missing values raise MissingZetaValueError listing the points.
    """
    p = Fraction(p)
    top = gauss_expansion.truncation_order if order is None else gauss_expansion.leading_order + order
    needed = []
    for r in range(gauss_expansion.leading_order, top + 1):
        u = p - r
        if u <= 0 and u.denominator == 1 and int(-u) % 2 == 1:
            if zeta_evaluator is None:
                needed.append(-int(-u))
    if needed:
        raise MissingZetaValueError(sorted(set(needed)))

    coeffs = []
    for r in range(gauss_expansion.leading_order, top + 1):
        g = gauss_expansion.coeff(r)
        if isinstance(g, Fraction):
            g = xp.FloatCoeff(float(g), abs(float(g)) * EPS64)
        u = p - r
        uf = float(u)
        if u > 0 or u.denominator != 1:
            fac = 2.0 * gamma(uf).real / gamma(uf / 2.0).real
            val = fac * g.val
            err = abs(fac) * g.err + abs(val) * 3.0 * _GAMMA_REL
        else:
            m = int(-u)
            if m % 2 == 0:
                sign = -1.0 if (m // 2) % 2 else 1.0
                fac = sign * math.factorial(m // 2) / math.factorial(m)
                val = fac * g.val
                err = abs(fac) * g.err + abs(val) * 2.0 * EPS64
            else:
                zres = zeta_evaluator(m)
                zval, zerr = zres if isinstance(zres, tuple) else (float(zres), 0.0)
                val = -zval / math.factorial(m)
                err = zerr / math.factorial(m) + abs(val) * 2.0 * EPS64
        coeffs.append(xp.FloatCoeff(val, err))

    meta = dict(gauss_expansion.meta or {})
    meta.update({"source": "gauss_to_exp", "kernel": "exp"})
    return xp.LaurentExpansion(
        gauss_expansion.leading_order,
        tuple(coeffs),
        xp.FLOAT,
        xp.POWER,
        meta=meta,
    )
