"""Heat traces with certified error bounds and their small-time expansions.

``heat_trace`` evaluates Tr(b k(t|D|)) for k = exp(-x) or exp(-x**2) by
summing levels up to a cutoff chosen so that a certified tail bound (driven
by the model's counting constant and the observable's growth envelope) drops
below the requested accuracy; the reported ``abs_error`` adds the floating
point rounding bound of the selected backend.

Expansions of psi(t) = t**p * Tr(b k(t|D|)) come either from exact closed
forms (generating functions for the integer-level families, theta products
for the Gaussian kernel) or from Richardson extrapolation on a geometric
sample grid (``fit_expansion``).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import expansion as xp
from .backend import EPS64, impl, rounding_bound, thread_count
from .errors import (
    DomainError,
    NoClosedFormError,
    NonGeometricGridError,
    ResourceBudgetError,
)
from .spectrum import Observable, SpectralModel, identity_observable, level_weight

__all__ = [
    "TraceSample",
    "heat_trace",
    "absolute_trace_bound",
    "sample_grid",
    "default_fit_grid",
    "closed_form_expansion",
    "fit_expansion",
    "trace_expansion",
    "samples_to_csv",
    "certified_tail",
]

KERNELS = ("exp", "gauss")

DEFAULT_MAX_LEVELS = 30_000_000


@dataclass(frozen=True)
class TraceSample:
    """One heat-trace value with a certified absolute error bound.

    ``met_target`` records whether abs_error reached the requested accuracy;
    it can be False when the float64 rounding floor sits above the target
    even though the spectral tail is under control.
    """

    t: float
    value: float
    abs_error: float
    kernel: str = "exp"
    met_target: bool = True


def certified_tail(model: SpectralModel, obs: Observable, t: float, V: float, kernel: str) -> float:
    """Upper bound for the absolute trace contribution of values v > V.

    Integer-level models compare the level weights against C*(1+k)**m and
    bound the tail by 2*C*(1+V)**m * exp(-t*V) / t once V >= max(2*m/t, 2)
    (Gaussian: C*(1+V)**m * exp(-(t*V)**2) / (V*t*t) once
    V >= max(sqrt(m+1)/t, 2)). Other level kinds fall back to a counting
    function bound with exponent degree + p. Projection-type observables use
    their total-mass bound instead; below the validity threshold the bound
    is reported as inf.
    """
    if obs.growth_class in ("projection", "rapid-decay"):
        if V >= obs.params.get("support_max", 0.0):
            return 0.0
        x = t * V if kernel == "exp" else (t * V) ** 2
        return obs.bound_constant * math.exp(-x)
    if model.level_kind == "integer":
        c_w, m = obs.envelope(model)
        if kernel == "exp":
            if V < max(2.0 * m / t, 2.0):
                return math.inf
            log_b = math.log(2.0 * c_w / t) + m * math.log1p(V) - t * V
        else:
            if V < max(math.sqrt(m + 1.0) / t, 2.0):
                return math.inf
            log_b = math.log(c_w / (V * t * t)) + m * math.log1p(V) - (t * V) ** 2
        return math.exp(log_b) if log_b <= 700.0 else math.inf
    m = obs.degree + float(model.p)
    c_tot = 2.0 * obs.bound_constant * model.counting_constant
    if kernel == "exp":
        if V < max(2.0 * m / t, 2.0):
            return math.inf
        log_b = math.log(c_tot) + m * math.log1p(V) - t * V
    else:
        if V < max(math.sqrt(m + 1.0) / t, 2.0):
            return math.inf
        log_b = math.log(c_tot) + (m + 1.0) * math.log1p(V) - (t * V) ** 2 - math.log(V)
    if log_b > 700.0:
        return math.inf
    return math.exp(log_b)


def _levels_for_cutoff(model: SpectralModel, V: float) -> int:
    """Number of levels needed so every value <= V is enumerated."""
    if model.level_kind == "lattice":
        return int(V * V) + 2
    return int(V) + 2


def _shells(model: SpectralModel, count: int) -> np.ndarray:
    cached = model.flags.get("_shell_cache")
    if cached is None or cached.shape[0] < count:
        cached = np.arange(max(count, 64), dtype=np.float64)
        model.flags["_shell_cache"] = cached
    return cached[:count]


def _evaluate(model: SpectralModel, obs: Observable, t: float, kernel: str, count: int):
    values, _, _ = model.levels(count)
    wp, wm = obs.weights(model, count)
    w = wp + wm
    if kernel == "exp":
        s, abs_s = impl.exp_weighted_sum(values, w, t)
    elif model.level_kind == "lattice":
        # lattice values are sqrt(k) by construction: exp(-(t*v)**2) = exp(-t*t*k)
        s, abs_s = impl.exp_weighted_sum(_shells(model, count), w, t * t)
    else:
        s, abs_s = impl.gauss_weighted_sum(values, w, t)
    return float(s), float(abs_s)


def _theta_factor(power: int, t: float, mmax: int) -> tuple[float, float, float]:
    """(S, abs_S, tail) for S = sum over all integers m of m**power exp(-(t m)**2).

    Odd powers vanish by symmetry; the tail bound needs t*mmax >= sqrt(power+1).
    """
    if power % 2 == 1:
        return 0.0, 0.0, 0.0
    s, abs_s = impl.theta_partial(power, t * t, mmax)
    s *= 2.0
    abs_s *= 2.0
    if power == 0:
        s += 1.0
        abs_s += 1.0
    x = t * mmax
    tail = math.inf
    if x * x >= power + 1 and x * x < 700.0:
        tail = 2.0 * mmax ** (power - 1) * math.exp(-x * x) / (t * t)
    elif x * x >= 700.0:
        tail = 0.0
    return s, abs_s, tail


def _gauss_factored(
    model: SpectralModel,
    obs: Observable,
    t: float,
    powers: tuple[int, int],
    eps: float | None,
) -> TraceSample:
    """Gaussian lattice trace through the separable theta factorization.

    The Gaussian kernel splits over lattice coordinates, so
    Tr = matrix_mult * S_a(t) * S_b(t) at O(cutoff) cost instead of
    O(cutoff**2) shells. Kernel-adjusted models add the exact correction
    W0 * (exp(-t**2) - 1) for the states moved from value 0 to 1.
    """
    a, b = powers
    base = model.unadjusted
    mmax = max(int(math.sqrt(max(a, b) + 1) / t), int(6.0 / t), 8)
    while True:
        sa, abs_a, tail_a = _theta_factor(a, t, mmax)
        sb, abs_b, tail_b = _theta_factor(b, t, mmax)
        mm = float(base.matrix_mult)
        value = mm * sa * sb
        tail = mm * (abs(sa) * tail_b + abs(sb) * tail_a + tail_a * tail_b)
        rounding = mm * (
            rounding_bound(mmax, abs_a) * abs(sb)
            + rounding_bound(mmax, abs_b) * abs(sa)
            + 4.0 * EPS64 * abs(value)
        )
        if model.adjusted:
            wp0, wm0 = level_weight(base, obs, 0)
            corr = (wp0 + wm0) * (math.exp(-t * t) - 1.0)
            value += corr
            rounding += 4.0 * EPS64 * abs(corr)
        err = tail + rounding
        target = eps / 2.0 if eps is not None else 8.0 * EPS64 * (mm * abs_a * abs_b)
        if tail <= target:
            return TraceSample(t, value, err, "gauss", eps is None or err <= eps)
        mmax *= 2


def heat_trace(
    model: SpectralModel,
    obs: Observable | None = None,
    t: float = 1.0,
    kernel: str = "exp",
    eps: float | None = 1e-10,
    max_levels: int = DEFAULT_MAX_LEVELS,
) -> TraceSample:
    """Tr(b exp(-t|D|)) or Tr(b exp(-t**2 D**2)) with a certified error bound.

    ``eps=None`` asks for the best the float64 backend can do (tail pushed to
    the rounding floor). A typed ResourceBudgetError carrying the achievable
    bound is raised when ``max_levels`` is too small for the target.
    Gaussian lattice traces with separable weights (identity and lattice
    monomials) always go through the factored theta path.
    """
    if obs is None:
        obs = identity_observable()
    if kernel not in KERNELS:
        raise DomainError(f"kernel must be one of {KERNELS}, got {kernel!r}")
    if not (t > 0) or not math.isfinite(t):
        raise DomainError("heat_trace needs finite t > 0")
    if eps is not None and not eps > 0:
        raise DomainError("eps must be positive (or None for best effort)")

    if kernel == "gauss" and model.level_kind == "lattice":
        if obs.name == "identity":
            return _gauss_factored(model, obs, t, (0, 0), eps)
        if "a" in obs.params and "b" in obs.params:
            return _gauss_factored(model, obs, t, (obs.params["a"], obs.params["b"]), eps)

    m = obs.degree + float(model.p)
    if kernel == "exp":
        v0 = max(2.0 * m / t, 2.0, 8.0 / t)
    else:
        v0 = max(math.sqrt(m + 1.0) / t, 2.0, 4.0 / t)
    if obs.growth_class in ("projection", "rapid-decay"):
        v0 = max(v0, obs.params.get("support_max", 0.0))

    level_cap = model.flags.get("level_count")  # explicit models are finite
    V = v0
    while True:
        count = _levels_for_cutoff(model, V)
        if level_cap is not None:
            count = min(count, level_cap)
        stuck = count >= max_levels or (level_cap is not None and count == level_cap)
        count = min(count, max_levels)
        if stuck:
            values, _, _ = model.levels(count)
            V = max(float(values[-1]), 2.0)
        tail = certified_tail(model, obs, t, V, kernel)
        value, abs_s = _evaluate(model, obs, t, kernel, count)
        rounding = rounding_bound(count, abs_s)
        err = tail + rounding
        target = eps / 2.0 if eps is not None else 8.0 * EPS64 * abs_s
        if tail <= target:
            return TraceSample(t, value, err, kernel, eps is None or err <= eps)
        if stuck:
            if eps is None:
                return TraceSample(t, value, err, kernel, True)
            raise ResourceBudgetError(
                f"tail bound {tail:.3e} stuck above eps={eps:g} for {model.name} "
                f"at t={t:g} with {count} levels (largest value {V:g})",
                achieved_bound=err,
            )
        V *= 2.0


def absolute_trace_bound(
    model: SpectralModel,
    obs: Observable | None = None,
    t: float = 1.0,
    kernel: str = "exp",
    max_levels: int = DEFAULT_MAX_LEVELS,
) -> float:
    """Upper bound on sum_v |w(v)| k(t, v); the signed trace in absolute value.

    Used to certify integral tails, so a few percent of slack is fine."""
    if obs is None:
        obs = identity_observable()
    m = obs.degree + float(model.p)
    if kernel == "exp":
        V = max(2.0 * m / t, 2.0, 8.0 / t)
    else:
        V = max(math.sqrt(m + 1.0) / t, 2.0, 4.0 / t)
    if obs.growth_class in ("projection", "rapid-decay"):
        V = max(V, obs.params.get("support_max", 0.0))
    level_cap = model.flags.get("level_count")
    while True:
        count = _levels_for_cutoff(model, V)
        if level_cap is not None:
            count = min(count, level_cap)
        stuck = count >= max_levels or (level_cap is not None and count == level_cap)
        count = min(count, max_levels)
        if stuck:
            values, _, _ = model.levels(count)
            V = max(float(values[-1]), 2.0)
        tail = certified_tail(model, obs, t, V, kernel)
        _, abs_s = _evaluate(model, obs, t, kernel, count)
        if stuck or tail <= 0.01 * abs_s + 1e-300:
            return abs_s + tail + rounding_bound(count, abs_s)
        V *= 2.0


def default_fit_grid(model: SpectralModel) -> dict:
    """Geometric sample grid used when fitting this model's expansion."""
    hint = model.flags.get("fit_grid")
    if hint:
        return dict(hint)
    return {"t0": 0.25, "rho": 0.5, "count": 12, "eps": None}


def sample_grid(
    model: SpectralModel,
    obs: Observable | None = None,
    t0: float = 0.25,
    rho: float = 0.5,
    count: int = 12,
    kernel: str = "exp",
    eps: float | None = None,
    max_levels: int = DEFAULT_MAX_LEVELS,
) -> list[TraceSample]:
    """Heat traces on the geometric grid t_j = t0 * rho**j, j = 0..count-1.

    Worker threads (capped by WHKAE_THREADS) split the grid; results keep the
    grid order regardless of thread scheduling.
    """
    if not (0.0 < rho < 1.0):
        raise DomainError("sample_grid needs 0 < rho < 1")
    if not t0 > 0 or count < 1:
        raise DomainError("sample_grid needs t0 > 0 and count >= 1")
    if obs is None:
        obs = identity_observable()
    ts = [t0 * rho**j for j in range(count)]

    def one(t: float) -> TraceSample:
        return heat_trace(model, obs, t, kernel=kernel, eps=eps, max_levels=max_levels)

    workers = thread_count()
    if workers <= 1 or count == 1:
        return [one(t) for t in ts]
    # evaluate the smallest t first so the shared level cache is fully grown
    # before concurrent reads
    last = one(ts[-1])
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rest = list(pool.map(one, ts[:-1]))
    return rest + [last]


def samples_to_csv(samples: list[TraceSample]) -> str:
    """CSV text with header t,value,abs_error,kernel (full float precision)."""
    lines = ["t,value,abs_error,kernel"]
    for s in samples:
        lines.append(f"{s.t!r},{s.value!r},{s.abs_error!r},{s.kernel}")
    return "\n".join(lines) + "\n"


# ---- closed-form expansions ----


def _double_factorial(n: int) -> int:
    if n <= 0:
        return 1
    return n * _double_factorial(n - 2)


def _geo_power(k: int, order: int) -> xp.LaurentExpansion:
    out = xp.geometric_expansion(order + k)
    acc = out
    for _ in range(k - 1):
        acc = xp.mul(acc, out)
    return acc


def _int_p(model: SpectralModel) -> int:
    if model.p.denominator != 1:
        raise NoClosedFormError(
            f"closed forms for {model.name} need an integer dimension parameter"
        )
    return int(model.p)


def _custom_closed_form(model: SpectralModel, obs: Observable, kernel: str, order: int):
    count = model.flags["level_count"]
    values, _, _ = model.levels(count)
    wp, wm = obs.weights(model, count)
    w = wp + wm
    coeffs = []
    for j in range(order + 1):
        if kernel == "exp":
            terms = w * (-values) ** j / math.factorial(j)
        else:
            if j % 2 == 1:
                coeffs.append(xp.FloatCoeff(0.0, 0.0))
                continue
            i = j // 2
            terms = w * (-(values**2)) ** i / math.factorial(i)
        val = float(terms.sum())
        err = (len(terms) + 4) * EPS64 * float(np.abs(terms).sum())
        coeffs.append(xp.FloatCoeff(val, err))
    return xp.LaurentExpansion(0, tuple(coeffs), xp.FLOAT, xp.POWER)


def _exp_closed_form(model: SpectralModel, obs: Observable, n: int) -> xp.LaurentExpansion:
    fam = model.flags.get("family")
    name = obs.name
    p = _int_p(model)
    if name == "kernel":
        return xp.LaurentExpansion(p, (Fraction(model.kernel_dim),), xp.RATIONAL, xp.BEYOND_ALL_ORDERS)
    if name.startswith("e") and "level" in obs.params:
        return xp.shift_power(xp.taylor_exp(-obs.params["level"], n), p)
    if name.startswith("diag") and "entries" in obs.params:
        acc = None
        for k, w in obs.params["entries"].items():
            term = xp.scale(xp.taylor_exp(-k, n), Fraction(w) if w == int(w) else w)
            acc = term if acc is None else xp.add(acc, term)
        if acc is None:
            return xp.LaurentExpansion(p, (Fraction(0),), xp.RATIONAL, xp.BEYOND_ALL_ORDERS)
        return xp.shift_power(acc, p)
    geo = xp.geometric_expansion(n + 1)
    x = xp.taylor_exp(-1, n + 1)
    if fam == "circle":
        if name == "identity":
            body = xp.add(xp.scale(geo, 2), xp.constant(-1, n + 1))
        elif name == "P":
            body = geo
        elif name == "1-P":
            body = xp.add(geo, xp.constant(-1, n + 1))
        elif name == "abs":
            body = xp.scale(xp.mul(x, _geo_power(2, n + 2)), 2)
        else:
            raise NoClosedFormError(f"no exp closed form for {model.name} with {name}")
        return xp.shift_power(body, 1)
    if fam == "number_op":
        if name in ("identity", "P"):
            body = geo
        elif name == "1-P":
            return xp.LaurentExpansion(0, (Fraction(0),) * (n + 1), xp.RATIONAL, xp.BEYOND_ALL_ORDERS)
        elif name == "abs":
            body = xp.mul(x, _geo_power(2, n + 2))
        else:
            raise NoClosedFormError(f"no exp closed form for {model.name} with {name}")
        return xp.shift_power(body, 1)
    if fam in ("sphere_torus", "sphere_eq"):
        ell = model.flags["ell"]
        one_plus_x = xp.add(xp.constant(1, n + 1), x)
        if fam == "sphere_torus":
            full = xp.mul(one_plus_x, _geo_power(ell + 1, n + ell + 2))
            plus = _geo_power(ell + 1, n + ell + 2)
        else:
            full = xp.mul(one_plus_x, _geo_power(2 * ell + 1, n + 2 * ell + 2))
            plus = _geo_power(ell + 1, n + 2 * ell + 2)
        if name == "identity":
            body = full
        elif name == "P":
            body = plus
        elif name == "1-P":
            body = xp.add(full, xp.scale(plus, -1))
        else:
            raise NoClosedFormError(f"no exp closed form for {model.name} with {name}")
        return xp.shift_power(xp.truncate(body, n - p), p)
    if fam in ("qds", "amplify"):
        base = model.flags["qds_base"]
        if name in ("identity", "P", "1-P"):
            inner = closed_form_expansion(base, obs, "exp", n + 2)
            tgeo = xp.shift_power(xp.geometric_expansion(n + 2), 1)
            return xp.mul(inner, tgeo)
        raise NoClosedFormError(f"no exp closed form for {model.name} with {name}")
    raise NoClosedFormError(f"no exp closed form for {model.name} with {name}")


def _theta_pair(c0: float, c1: float, n: int) -> xp.LaurentExpansion:
    coeffs = [xp.FloatCoeff(c0, 2 * EPS64 * abs(c0)), xp.FloatCoeff(c1, 2 * EPS64 * abs(c1))]
    coeffs += [xp.FloatCoeff(0.0, 0.0)] * (n - 1)
    return xp.LaurentExpansion(0, tuple(coeffs), xp.FLOAT, xp.BEYOND_ALL_ORDERS)


def _gauss_closed_form(model: SpectralModel, obs: Observable, n: int) -> xp.LaurentExpansion:
    fam = model.flags.get("family")
    name = obs.name
    p = _int_p(model)
    if name == "kernel":
        return xp.LaurentExpansion(p, (Fraction(model.kernel_dim),), xp.RATIONAL, xp.BEYOND_ALL_ORDERS)
    if name.startswith("e") and "level" in obs.params:
        lvl = obs.params["level"]
        v = model.value_at(lvl)
        if v != int(v):
            raise NoClosedFormError("rank-one Gaussian closed form needs an integer value")
        return xp.to_float(xp.shift_power(xp.gaussian_decay(int(v) ** 2, n), p))
    root_pi = math.sqrt(math.pi)
    if fam == "circle":
        if name == "identity":
            return _theta_pair(root_pi, 0.0, n)
        if name == "P":
            return _theta_pair(root_pi / 2.0, 0.5, n)
        if name == "1-P":
            return _theta_pair(root_pi / 2.0, -0.5, n)
        raise NoClosedFormError(f"no Gaussian closed form for {model.name} with {name}")
    if fam == "number_op":
        if name in ("identity", "P"):
            return _theta_pair(root_pi / 2.0, 0.5, n)
        if name == "1-P":
            return xp.LaurentExpansion(
                0, (xp.FloatCoeff(0.0, 0.0),) * (n + 1), xp.FLOAT, xp.BEYOND_ALL_ORDERS
            )
        raise NoClosedFormError(f"no Gaussian closed form for {model.name} with {name}")
    if fam == "nc_torus":
        if name == "identity":
            a = b = 0
        elif "a" in obs.params and "b" in obs.params:
            a, b = obs.params["a"], obs.params["b"]
        else:
            raise NoClosedFormError(f"no Gaussian closed form for {model.name} with {name}")
        lead = -(a + b)
        width = n - lead + 1
        zeros = (xp.FloatCoeff(0.0, 0.0),) * width
        if a % 2 == 1 or b % 2 == 1:
            return xp.LaurentExpansion(lead, zeros, xp.FLOAT, xp.BEYOND_ALL_ORDERS)
        # product of one-dimensional theta moments:
        # sum(m**(2i) e^{-u m**2}) ~ sqrt(pi) (2i-1)!! 2**-i u**(-i-1/2)
        c = (
            model.matrix_mult
            * math.pi
            * _double_factorial(a - 1)
            * _double_factorial(b - 1)
            / 2.0 ** ((a + b) // 2)
        )
        coeffs = (xp.FloatCoeff(c, 4 * EPS64 * abs(c)),) + zeros[1:]
        return xp.LaurentExpansion(lead, coeffs, xp.FLOAT, xp.BEYOND_ALL_ORDERS)
    raise NoClosedFormError(f"no Gaussian closed form for {model.name} with {name}")


def closed_form_expansion(
    model: SpectralModel,
    obs: Observable | None = None,
    kernel: str = "exp",
    order: int = 12,
) -> xp.LaurentExpansion:
    """Exact small-time expansion of psi(t) = t**p Tr(b k(t|D|)), when known.

    Exponential-kernel forms come from geometric generating functions and are
    exact rationals; Gaussian-kernel forms come from theta products and carry
    beyond-all-orders remainders. Raises NoClosedFormError otherwise.
    """
    if obs is None:
        obs = identity_observable()
    if kernel not in KERNELS:
        raise DomainError(f"kernel must be one of {KERNELS}, got {kernel!r}")
    if model.flags.get("family") == "custom":
        out = _custom_closed_form(model, obs, kernel, order)
    elif model.adjusted:
        base = model.base
        inner = closed_form_expansion(base, obs, kernel, order + 2)
        w0 = sum(level_weight(base, obs, 0))
        p = _int_p(model)
        if kernel == "exp":
            decay = xp.add(xp.taylor_exp(-1, order + 2), xp.constant(-1, order + 2))
        else:
            decay = xp.add(xp.gaussian_decay(1, order + 2), xp.constant(-1, order + 2))
        corr = xp.shift_power(xp.scale(decay, Fraction(w0) if w0 == int(w0) else w0), p)
        if inner.backend != corr.backend:
            inner, corr = xp.to_float(inner), xp.to_float(corr)
        out = xp.add(inner, corr)
    elif kernel == "exp":
        out = _exp_closed_form(model, obs, order)
    else:
        out = _gauss_closed_form(model, obs, order)
    out = xp.truncate(out, order) if out.truncation_order > order else out
    out.meta = {
        "source": "closed-form",
        "model": model.name,
        "observable": obs.name,
        "kernel": kernel,
    }
    return out


# ---- Richardson fitting ----


def _grid_ratio(ts: list[float]) -> float:
    ratios = [ts[j + 1] / ts[j] for j in range(len(ts) - 1)]
    rho = ratios[0]
    for r in ratios[1:]:
        if abs(r - rho) > 1e-9 * rho:
            raise NonGeometricGridError(
                "fit_expansion needs a geometric grid t_j = t0 * rho**j"
            )
    if not (0.0 < rho < 1.0):
        raise NonGeometricGridError("fit_expansion needs a decreasing geometric grid")
    return rho


def fit_expansion(
    samples: list[TraceSample],
    p: Fraction | int,
    order: int,
    leading_order: int = 0,
    tol: float | None = None,
) -> xp.LaurentExpansion:
    """Recover coefficients of psi(t) = t**p * value(t) = sum a_r t**r by
    repeated Richardson extrapolation on a geometric grid.

    Coefficients are extracted lowest power first; each step removes the
    fitted part, rescales, and extrapolates t -> 0 with a noise-aware choice
    of tableau depth, so the reported per-coefficient error bounds reflect
    both sample error bounds and cancellation. With ``tol`` given, a
    coefficient whose error estimate exceeds it is flagged (not rejected) in
    ``meta["met_tol"]``.
    """
    if len(samples) < 3:
        raise DomainError("fit_expansion needs at least 3 samples")
    if order < 0:
        raise DomainError("fit_expansion needs order >= 0")
    if order > len(samples) - 2:
        raise DomainError("fit_expansion needs order <= count - 2")
    samples = sorted(samples, key=lambda s: -s.t)
    ts = [s.t for s in samples]
    rho = _grid_ratio(ts)
    pf = float(p)
    y = [s.value * s.t**pf for s in samples]
    yerr = [s.abs_error * s.t**pf + 4 * EPS64 * abs(v) for s, v in zip(samples, y)]

    coeffs: list[xp.FloatCoeff] = []
    resid = list(y)
    rerr = list(yerr)
    nmax = len(ts) - 1
    for r in range(order + 1):
        q = leading_order + r
        z = [resid[j] / ts[j] ** q for j in range(len(ts))]
        zerr = [rerr[j] / ts[j] ** q + 2 * EPS64 * abs(v) for j, v in enumerate(z)]
        rows = [z]
        errs = [zerr]
        for m in range(1, nmax + 1):
            prev, perr = rows[-1], errs[-1]
            cur, cerr = [], []
            denom = 1.0 - rho**m
            for j in range(len(prev) - 1):
                cur.append((prev[j + 1] - rho**m * prev[j]) / denom)
                cerr.append((perr[j + 1] + rho**m * perr[j]) / denom + 2 * EPS64 * abs(cur[-1]))
            rows.append(cur)
            errs.append(cerr)
        best_val, best_est = rows[0][-1], abs(rows[0][-1] - rows[0][-2]) + errs[0][-1]
        for m in range(1, nmax + 1):
            for j in range(len(rows[m])):
                est = abs(rows[m][j] - rows[m - 1][j + 1]) + errs[m][j]
                if est < best_est:
                    best_val, best_est = rows[m][j], est
        a_r = best_val
        coeffs.append(xp.FloatCoeff(a_r, best_est))
        for j in range(len(ts)):
            resid[j] -= a_r * ts[j] ** q
            rerr[j] += best_est * ts[j] ** q + 2 * EPS64 * abs(a_r * ts[j] ** q)

    meta = {
        "source": "fit",
        "grid": {"t0": ts[0], "rho": rho, "count": len(ts)},
        "kernel": samples[0].kernel,
    }
    if tol is not None:
        meta["tol"] = tol
        meta["met_tol"] = tuple(c.err <= tol for c in coeffs)
    return xp.LaurentExpansion(
        leading_order,
        tuple(coeffs),
        xp.FLOAT,
        xp.POWER,
        meta=meta,
    )


def trace_expansion(
    model: SpectralModel,
    obs: Observable | None = None,
    kernel: str = "exp",
    order: int = 12,
    max_levels: int = DEFAULT_MAX_LEVELS,
) -> xp.LaurentExpansion:
    """Closed-form expansion when available, otherwise a Richardson fit on the
    model's default geometric grid."""
    if obs is None:
        obs = identity_observable()
    try:
        return closed_form_expansion(model, obs, kernel, order)
    except NoClosedFormError:
        pass
    cache = model.flags.setdefault("_fit_cache", {})
    key = (obs.name, kernel, order)
    if key not in cache:
        grid = default_fit_grid(model)
        samples = sample_grid(
            model,
            obs,
            t0=grid["t0"],
            rho=grid["rho"],
            count=max(grid["count"], order + 2),
            kernel=kernel,
            eps=grid.get("eps"),
            max_levels=max_levels,
        )
        cache[key] = fit_expansion(samples, model.p, order)
    return cache[key]
