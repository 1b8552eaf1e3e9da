"""Spectral models and trace observables.

A :class:`SpectralModel` describes the spectrum of |D| for a spectral triple
through a lazy level enumerator: level k has a value v_k (strictly increasing,
v_0 = 0 allowed) and multiplicities (mult_plus, mult_minus) split by the sign
of D. The kernel of D is counted on the plus side (the sign operator is taken
to be +1 on ker D; ``flags["kernel_sign"]`` records this).

Two level kinds are built in:

* ``integer``: v_k = k (circle Dirac, number operator, the odd-sphere models
  and everything produced by the double suspension);
* ``lattice``: v_k = sqrt(k) with shell weights from the integer lattice
  (the flat 2-torus Dirac, doubled by its 2x2 matrix structure).

Custom truncated models can be loaded from JSON:
``{"levels": [{"v":…, "mp":…, "mm":…}, …], "p":…, "C":…, "kernel_dim":…}``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .backend import impl
from .errors import (
    DomainError,
    ResourceBudgetError,
    UnknownModelError,
    UnknownObservableError,
)

__all__ = [
    "SpectralModel",
    "Observable",
    "builtin",
    "get_model",
    "model_from_json",
    "kernel_adjust",
    "level_weight",
    "identity_observable",
    "abs_value_observable",
    "plus_projection",
    "minus_projection",
    "kernel_projection",
    "rank_one",
    "torus_monomial",
    "finite_diag",
    "get_observable",
    "BUILTIN_MODELS",
]

_INT64_SAFE = 2**62


def _int_array(values: list[int]) -> np.ndarray:
    """int64 when exact, float64 beyond the exact range."""
    if values and max(abs(v) for v in values) >= _INT64_SAFE:
        return np.asarray(values, dtype=np.float64)
    return np.asarray(values, dtype=np.int64)


@dataclass
class SpectralModel:
    """Spectrum of |D| with a sign split, counting data and growth bounds.

    ``counting_constant`` C certifies N(lambda) <= C (1+lambda)**p and
    ``mult_bound = (C_m, m)`` certifies mult_plus + mult_minus at value v is
    at most C_m (1+v)**m; both feed the certified tail bounds in trace/zeta.
    """

    name: str
    p: Fraction
    kernel_dim: int
    level_kind: str  # "integer" | "lattice" | "explicit"
    counting_constant: float
    mult_bound: tuple[float, int]
    matrix_mult: int = 1
    flags: dict = field(default_factory=dict)
    base: "SpectralModel | None" = None  # kernel-adjustment parent
    _build: Callable[[int], tuple] | None = field(default=None, repr=False)
    _counting: Callable[[float], int] | None = field(default=None, repr=False)
    _cache: tuple | None = field(default=None, repr=False)

    # ---- level access ----

    def levels(self, count: int):
        """Arrays (values, mult_plus, mult_minus) for levels 0..count-1.

        Returned arrays are cached views; treat them as read-only. Builders
        may deliver fewer levels than asked for (truncated custom models);
        only a shortfall against ``count`` itself is an error.
        """
        if count < 1:
            raise DomainError("level count must be >= 1")
        if self._cache is None or self._cache[0].shape[0] < count:
            n = max(count, 64)
            if self._cache is not None:
                n = max(n, 2 * self._cache[0].shape[0])
            self._cache = self._build(n)
        v, mp, mm = self._cache
        if v.shape[0] < count:
            raise ResourceBudgetError(
                f"model {self.name!r} provides only {v.shape[0]} levels, "
                f"{count} requested",
                achieved_bound=float("inf"),
            )
        return v[:count], mp[:count], mm[:count]

    def value_at(self, k: int) -> float:
        return float(self.levels(k + 1)[0][k])

    def mult_at(self, k: int) -> tuple[int, int]:
        _, mp, mm = self.levels(k + 1)
        return int(mp[k]), int(mm[k])

    def counting(self, lam: float) -> int:
        """N(lambda): number of eigenvalues (with multiplicity) of value <= lambda."""
        if lam < 0:
            return 0
        if self._counting is not None:
            return self._counting(lam)
        if self.level_kind == "lattice":
            kmax = int(math.floor(lam * lam + 1e-9))
            _, mp, mm = self.levels(kmax + 1)
            return int((mp + mm).sum())
        kmax = int(math.floor(lam + 1e-9))
        _, mp, mm = self.levels(kmax + 1)
        return int((mp + mm).sum())

    # ---- derived properties ----

    @property
    def p_floor(self) -> int:
        return int(self.p) if self.p.denominator == 1 else int(math.floor(self.p))

    @property
    def adjusted(self) -> bool:
        return bool(self.flags.get("adjusted"))

    @property
    def unadjusted(self) -> "SpectralModel":
        return self.base if self.adjusted and self.base is not None else self

    @property
    def min_positive_value(self) -> float:
        """Smallest positive eigenvalue value (with nonzero multiplicity)."""
        count = 64
        while True:
            v, mp, mm = self.levels(count)
            tot = mp + mm
            pos = np.nonzero((v > 0) & (tot > 0))[0]
            if pos.size:
                return float(v[pos[0]])
            count *= 2
            if count > 1 << 20:
                raise DomainError(f"model {self.name} has no positive spectrum")

    def adjust_weight_arrays(self, wp: np.ndarray, wm: np.ndarray) -> None:
        """Apply the D -> D + P level move to observable weight arrays in place."""
        if not self.adjusted:
            return
        if wp.shape[0] >= 2:
            moved = wp[0] + wm[0]
            wp[1] = wp[1] + moved
        wp[0] = 0
        wm[0] = 0


# ---- builtin builders ----


def _circle_build(n: int):
    v = np.arange(n, dtype=np.float64)
    mp = np.ones(n, dtype=np.int64)
    mm = np.ones(n, dtype=np.int64)
    mm[0] = 0
    return v, mp, mm


def _number_op_build(n: int):
    v = np.arange(n, dtype=np.float64)
    mp = np.ones(n, dtype=np.int64)
    mm = np.zeros(n, dtype=np.int64)
    return v, mp, mm


def _sphere_torus_build(ell: int):
    def build(n: int):
        v = np.arange(n, dtype=np.float64)
        mp = _int_array([math.comb(k + ell, ell) for k in range(n)])
        mm = _int_array([math.comb(k - 1 + ell, ell) if k >= 1 else 0 for k in range(n)])
        return v, mp, mm

    return build


def _sphere_eq_build(ell: int):
    def build(n: int):
        v = np.arange(n, dtype=np.float64)
        plus = [math.comb(k + ell, ell) for k in range(n)]
        total = [
            math.comb(k + 2 * ell, 2 * ell)
            + (math.comb(k - 1 + 2 * ell, 2 * ell) if k >= 1 else 0)
            for k in range(n)
        ]
        mp = _int_array(plus)
        mm = _int_array([t - q for t, q in zip(total, plus)])
        return v, mp, mm

    return build


def _nc_torus_build(n: int):
    r2 = np.asarray(impl.lattice_counts(n - 1), dtype=np.int64)
    v = np.sqrt(np.arange(n, dtype=np.float64))
    mp = r2.copy()
    mm = r2.copy()
    mp[0] = 2  # both matrix copies of the lattice origin; kernel sits on +
    mm[0] = 0
    return v, mp, mm


def _disk_count(lam: float) -> int:
    kmax = int(math.floor(lam * lam + 1e-9))
    if kmax < 0:
        return 0
    r = math.isqrt(kmax)
    total = 0
    for m in range(-r, r + 1):
        total += 2 * math.isqrt(kmax - m * m) + 1
    return total


def _hockey_stick_counting(ell: int):
    def counting(lam: float) -> int:
        v = int(math.floor(lam + 1e-9))
        if v < 0:
            return 0
        return math.comb(v + ell + 1, ell + 1) + math.comb(v + ell, ell + 1)

    return counting


def _sphere_eq_counting(ell: int):
    inner = _hockey_stick_counting(2 * ell)

    def counting(lam: float) -> int:
        return inner(lam)

    return counting


_BUILTIN_CACHE: dict = {}


def builtin(name: str, ell: int | None = None) -> SpectralModel:
    """Construct a builtin model: circle, number_op, nc_torus, sphere_torus(ell),
    sphere_eq(ell).

    Instances are shared per (name, ell) so that level and weight caches grown
    by one caller benefit the next."""
    key = (name, ell)
    hit = _BUILTIN_CACHE.get(key)
    if hit is not None:
        return hit
    made = _make_builtin(name, ell)
    _BUILTIN_CACHE[key] = made
    return made


def _make_builtin(name: str, ell: int | None = None) -> SpectralModel:
    if name == "circle":
        return SpectralModel(
            name="circle",
            p=Fraction(1),
            kernel_dim=1,
            level_kind="integer",
            counting_constant=2.5,  # covers N(lambda)/lambda as well, down to lambda=10
            mult_bound=(2.0, 0),
            flags={"family": "circle", "kernel_sign": "+1"},
            _build=_circle_build,
            _counting=lambda lam: 1 + 2 * int(math.floor(lam + 1e-9)) if lam >= 0 else 0,
        )
    if name == "number_op":
        return SpectralModel(
            name="number_op",
            p=Fraction(1),
            kernel_dim=1,
            level_kind="integer",
            counting_constant=1.2,
            mult_bound=(1.0, 0),
            flags={"family": "number_op", "kernel_sign": "+1"},
            _build=_number_op_build,
            _counting=lambda lam: int(math.floor(lam + 1e-9)) + 1 if lam >= 0 else 0,
        )
    if name == "nc_torus":
        return SpectralModel(
            name="nc_torus",
            p=Fraction(2),
            kernel_dim=2,
            level_kind="lattice",
            counting_constant=8.0,
            mult_bound=(16.0, 1),
            matrix_mult=2,
            flags={
                "family": "nc_torus",
                "kernel_sign": "+1",
                "fit_grid": {"t0": 0.5, "rho": 0.5, "count": 6, "eps": 5e-11},
            },
            _build=_nc_torus_build,
            _counting=lambda lam: 2 * _disk_count(lam),
        )
    if name == "sphere_torus":
        if ell is None or ell < 1:
            raise DomainError("sphere_torus needs ell >= 1")
        c = 2.0 * ell**ell / math.factorial(ell)
        return SpectralModel(
            name=f"sphere_torus({ell})",
            p=Fraction(ell + 1),
            kernel_dim=1,
            level_kind="integer",
            counting_constant=2.0 * (ell + 1) ** (ell + 1) / math.factorial(ell + 1),
            mult_bound=(max(c, 2.0), ell),
            flags={"family": "sphere_torus", "ell": ell, "kernel_sign": "+1"},
            _build=_sphere_torus_build(ell),
            _counting=_hockey_stick_counting(ell),
        )
    if name == "sphere_eq":
        if ell is None or ell < 1:
            raise DomainError("sphere_eq needs ell >= 1")
        c = 2.0 * (2 * ell) ** (2 * ell) / math.factorial(2 * ell)
        return SpectralModel(
            name=f"sphere_eq({ell})",
            p=Fraction(2 * ell + 1),
            kernel_dim=1,
            level_kind="integer",
            counting_constant=2.0 * (2 * ell + 1) ** (2 * ell + 1) / math.factorial(2 * ell + 1),
            mult_bound=(max(c, 2.0), 2 * ell),
            flags={"family": "sphere_eq", "ell": ell, "kernel_sign": "+1"},
            _build=_sphere_eq_build(ell),
            _counting=_sphere_eq_counting(ell),
        )
    raise UnknownModelError(name)


BUILTIN_MODELS = {
    "circle": "Dirac operator on the circle: |D| eigenvalue k with multiplicity 2 (k>=1), 1-dim kernel, p=1",
    "number_op": "number operator on l2(N): eigenvalue k (k>=0) with multiplicity 1, p=1",
    "nc_torus": "flat 2-torus Dirac (matrix form): |D| = sqrt(m^2+n^2) over the integer lattice, doubled, p=2",
    "sphere_torus(ell)": "odd quantum sphere, torus-like parametrization: integer levels with binomial sign split, p=ell+1",
    "sphere_eq(ell)": "odd quantum sphere, equatorial parametrization: integer levels, p=2*ell+1",
    "qds(model)": "quantum double suspension of any integer-level model (multiplicities become running sums, p -> p+1)",
    "amplify(model)": "same spectrum transform as qds(model) but tagged as a tensor amplification",
}


def kernel_adjust(model: SpectralModel) -> SpectralModel:
    """Spectrum of D + P, P the kernel projection: kernel moves to value 1.

    For kernel-free models returns an identical copy with a warning flag. The
    result records the original dimension in ``flags["adjusted_kernel_dim"]``.
    """
    cached = model.flags.get("_adjusted_cache")
    if cached is not None:
        return cached
    if model.kernel_dim == 0:
        flags = {k: v for k, v in model.flags.items() if not k.startswith("_")}
        flags["kernel_adjust_noop"] = True
        return SpectralModel(
            name=model.name,
            p=model.p,
            kernel_dim=0,
            level_kind=model.level_kind,
            counting_constant=model.counting_constant,
            mult_bound=model.mult_bound,
            matrix_mult=model.matrix_mult,
            flags=flags,
            base=model.base,
            _build=model._build,
            _counting=model._counting,
        )
    if model.adjusted:
        raise DomainError(f"model {model.name} is already kernel-adjusted")

    kd = model.kernel_dim

    def build(n: int):
        v, mp, mm = model._build(n)
        if n >= 2 and abs(float(v[1]) - 1.0) > 1e-12:
            raise DomainError(
                "kernel_adjust needs a level of value 1 to receive the kernel"
            )
        mp = mp.copy()
        mm = mm.copy()
        if n >= 2:
            mp[1] += kd
        mp[0] = 0
        mm[0] = 0
        return v, mp, mm

    inner = model._counting

    def counting(lam: float) -> int:
        if inner is None:
            raise DomainError("no counting closed form")  # generic path used instead
        base = inner(lam)
        if lam < 0:
            return 0
        if lam < 1:
            return base - kd
        return base

    flags = {k: v for k, v in model.flags.items() if not k.startswith("_")}
    flags["adjusted"] = True
    flags["adjusted_kernel_dim"] = kd
    adjusted = SpectralModel(
        name=f"kernel_adjust({model.name})",
        p=model.p,
        kernel_dim=0,
        level_kind=model.level_kind,
        counting_constant=model.counting_constant + kd,
        mult_bound=(model.mult_bound[0] + kd, model.mult_bound[1]),
        matrix_mult=model.matrix_mult,
        flags=flags,
        base=model,
        _build=build,
        _counting=counting if inner is not None else None,
    )
    model.flags["_adjusted_cache"] = adjusted
    return adjusted


# ---- observables ----


@dataclass
class Observable:
    """Diagonal trace weights for one observable, split by the sign of D.

    ``growth_class`` declares the certified envelope: aggregated weight at a
    level of value v is bounded by

    * bounded / polynomial: bound_constant * (1+v)**degree * multiplicity,
    * projection / rapid-decay: bound_constant, independent of multiplicity.
    """

    name: str
    growth_class: str  # bounded | polynomial | projection | rapid-decay
    degree: int = 0
    bound_constant: float = 1.0
    toeplitz_mean: float | None = None
    params: dict = field(default_factory=dict)
    _build: Callable[[SpectralModel, int], tuple] | None = field(default=None, repr=False)
    _wcache: dict = field(default_factory=dict, repr=False)

    def weights(self, model: SpectralModel, count: int):
        """Float arrays (W_plus, W_minus) for levels 0..count-1.

        Cached per model; returned slices are views, treat them as read-only.
        """
        key = id(model)
        hit = self._wcache.get(key)
        if hit is None or hit[0] < count:
            n = max(count, 64)
            if hit is not None:
                n = max(n, 2 * hit[0])
            wp, wm = self._build(model.unadjusted, n)
            wp = np.asarray(wp, dtype=np.float64).copy()
            wm = np.asarray(wm, dtype=np.float64).copy()
            model.adjust_weight_arrays(wp, wm)
            hit = (n, wp, wm, model)  # keep the model ref so id() stays valid
            self._wcache[key] = hit
        return hit[1][:count], hit[2][:count]

    def envelope(self, model: SpectralModel) -> tuple[float, int]:
        """(C, m) with |W_plus + W_minus| at value v bounded by C (1+v)**m."""
        cm, mm_deg = model.mult_bound
        if self.growth_class in ("projection", "rapid-decay"):
            return self.bound_constant, 0
        if self.growth_class == "bounded":
            return self.bound_constant * cm, mm_deg
        if self.growth_class == "polynomial":
            return self.bound_constant * cm, mm_deg + self.degree
        raise DomainError(f"unknown growth class {self.growth_class!r}")


def level_weight(model: SpectralModel, obs: Observable, k: int) -> tuple[float, float]:
    """Summed observable weights over the +/- eigenspaces at level k."""
    wp, wm = obs.weights(model, k + 1)
    return float(wp[k]), float(wm[k])


def identity_observable() -> Observable:
    def build(model: SpectralModel, n: int):
        _, mp, mm = model.levels(n)
        return mp.astype(np.float64), mm.astype(np.float64)

    return Observable("identity", "bounded", 0, 1.0, _build=build)


def abs_value_observable() -> Observable:
    """Weight |D|: multiplies each level's multiplicity by its value."""

    def build(model: SpectralModel, n: int):
        v, mp, mm = model.levels(n)
        return v * mp, v * mm

    return Observable("abs", "polynomial", 1, 1.0, _build=build)


def plus_projection() -> Observable:
    """P = (1 + F)/2, F the sign of D (kernel counted on the plus side)."""

    def build(model: SpectralModel, n: int):
        _, mp, _ = model.levels(n)
        return mp.astype(np.float64), np.zeros(n)

    return Observable("P", "bounded", 0, 1.0, _build=build)


def minus_projection() -> Observable:
    def build(model: SpectralModel, n: int):
        _, _, mm = model.levels(n)
        return np.zeros(n), mm.astype(np.float64)

    return Observable("1-P", "bounded", 0, 1.0, _build=build)


def kernel_projection() -> Observable:
    """Projection onto ker D (weights follow the kernel under adjustment)."""

    def build(model: SpectralModel, n: int):
        wp = np.zeros(n)
        wm = np.zeros(n)
        wp[0] = model.kernel_dim
        return wp, wm

    # support never exceeds value 1 (the kernel moves there under adjustment)
    return Observable("kernel", "projection", 0, 1.0, params={"support_max": 1.0}, _build=build)


def rank_one(level: int) -> Observable:
    """Rank-one projection onto one basis vector at the given integer level."""
    if level < 0:
        raise DomainError("rank_one level must be >= 0")

    def build(model: SpectralModel, n: int):
        wp = np.zeros(n)
        wm = np.zeros(n)
        if level < n:
            wp[level] = 1.0
        return wp, wm

    return Observable(
        f"e{level}",
        "projection",
        0,
        1.0,
        params={"level": level, "support_max": float(max(level, 1))},
        _build=build,
    )


def torus_monomial(a: int, b: int) -> Observable:
    """Toeplitz-type lattice weight m**a * n**b on the nc_torus shells.

    Each of the matrix_mult sign copies of a lattice point carries the full
    point weight, so the total weight at shell k is
    matrix_mult * sum(m**a n**b over m*m + n*n = k).
    """
    if a < 0 or b < 0:
        raise DomainError("monomial exponents must be >= 0")

    def build(model: SpectralModel, n: int):
        if model.flags.get("family") != "nc_torus":
            raise DomainError("torus monomials only apply to the nc_torus model")
        key = ("monomial", a, b, n)
        cache = model.flags.setdefault("_monomial_cache", {})
        hit = next((v for k, v in cache.items() if k[:3] == key[:3] and k[3] >= n), None)
        if hit is None:
            w = np.asarray(impl.lattice_monomial_weights(n - 1, a, b), dtype=np.float64)
            cache.clear()
            cache[key] = w
            hit = w
        w = hit[:n]
        wp = w.copy()
        wm = w.copy()
        w0 = float(w[0])  # origin: both copies sit on the plus side
        wp[0] = model.matrix_mult * w0
        wm[0] = 0.0
        return wp, wm

    name = f"m{a}" if b == 0 else (f"n{b}" if a == 0 else f"m{a}n{b}")
    return Observable(name, "polynomial", a + b, 1.0, params={"a": a, "b": b}, _build=build)


def finite_diag(entries: dict[int, float]) -> Observable:
    """Finitely supported diagonal weight on integer levels (rapid decay)."""
    if any(k < 0 for k in entries):
        raise DomainError("finite_diag levels must be >= 0")
    bound = sum(abs(v) for v in entries.values())  # total mass, certifies the tail

    def build(model: SpectralModel, n: int):
        wp = np.zeros(n)
        wm = np.zeros(n)
        for k, w in entries.items():
            if k < n:
                wp[k] = w
        return wp, wm

    name = "diag{" + ",".join(f"{k}:{entries[k]:g}" for k in sorted(entries)) + "}"
    support = max(float(max(entries)), 1.0) if entries else 1.0
    return Observable(
        name,
        "rapid-decay",
        0,
        max(bound, 1e-300),
        params={"entries": dict(entries), "support_max": support},
        _build=build,
    )


_MONOMIAL_RE = re.compile(r"^(?:m(\d+))?(?:n(\d+))?$")


def get_observable(spec: str) -> Observable:
    """Observable registry for CLI strings.

    Accepts: identity, abs, P, 1-P, kernel, e<k>, and nc_torus monomials
    like m2, n4, m2n2.
    """
    s = spec.strip()
    if s in ("identity", "1", "id"):
        return identity_observable()
    if s == "abs":
        return abs_value_observable()
    if s == "P":
        return plus_projection()
    if s == "1-P":
        return minus_projection()
    if s == "kernel":
        return kernel_projection()
    if s.startswith("e") and s[1:].isdigit():
        return rank_one(int(s[1:]))
    m = _MONOMIAL_RE.match(s)
    if m and (m.group(1) or m.group(2)):
        return torus_monomial(int(m.group(1) or 0), int(m.group(2) or 0))
    raise UnknownObservableError(spec)


# ---- model registry / parsing ----

_CALL_RE = re.compile(r"^([a-z_]+)\((.*)\)$")


def get_model(spec: str) -> SpectralModel:
    """Parse a model spec string, e.g. 'circle', 'sphere_torus(2)', 'qds(circle)'."""
    s = spec.strip()
    if s in ("circle", "number_op", "nc_torus"):
        return builtin(s)
    m = _CALL_RE.match(s)
    if not m:
        raise UnknownModelError(spec)
    head, arg = m.group(1), m.group(2).strip()
    if head in ("sphere_torus", "sphere_eq"):
        if not arg.isdigit():
            raise DomainError(f"{head} needs an integer parameter, got {arg!r}")
        return builtin(head, ell=int(arg))
    if head in ("qds", "amplify", "kernel_adjust"):
        inner = get_model(arg)
        if head == "kernel_adjust":
            return kernel_adjust(inner)
        from . import qds  # deferred: qds imports this module at top level

        return qds.suspend(inner) if head == "qds" else qds.amplify(inner)
    raise UnknownModelError(spec)


def model_from_json(d: dict) -> SpectralModel:
    """Custom truncated model from its JSON description."""
    try:
        levels = d["levels"]
        p_raw = d["p"]
        c = float(d["C"])
        kd = int(d["kernel_dim"])
    except KeyError as exc:
        raise DomainError(f"custom model JSON missing field {exc}") from exc
    if not levels:
        raise DomainError("custom model needs at least one level")
    vals = [float(e["v"]) for e in levels]
    mps = [int(e["mp"]) for e in levels]
    mms = [int(e["mm"]) for e in levels]
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise DomainError("custom model values must be strictly increasing")
    if any(x < 0 for x in mps + mms) or vals[0] < 0:
        raise DomainError("custom model needs nonnegative values and multiplicities")
    p = Fraction(p_raw[0], p_raw[1]) if isinstance(p_raw, (list, tuple)) else Fraction(p_raw)
    if p <= 0:
        raise DomainError("custom model needs p > 0")
    kernel = (mps[0] + mms[0]) if vals[0] == 0.0 else 0
    if kd != kernel:
        raise DomainError("kernel_dim must equal the total multiplicity at value 0")

    v_arr = np.asarray(vals, dtype=np.float64)
    mp_arr = _int_array(mps)
    mm_arr = _int_array(mms)

    def build(n: int):
        k = min(n, len(vals))
        return v_arr[:k], mp_arr[:k], mm_arr[:k]

    populated = [v for v, m1, m2 in zip(vals, mps, mms) if m1 + m2 > 0]
    largest = max([1.0] + populated)

    def counting(lam: float) -> int:
        tot = 0
        for v, m1, m2 in zip(vals, mps, mms):
            if v <= lam + 1e-12:
                tot += m1 + m2
        return tot

    return SpectralModel(
        name=d.get("name", "custom"),
        p=p,
        kernel_dim=kd,
        level_kind="explicit",
        counting_constant=c,
        mult_bound=(max(float(m1 + m2) for m1, m2 in zip(mps, mms)), 0),
        flags={"family": "custom", "kernel_sign": "+1", "max_value": largest,
               "level_count": len(vals)},
        _build=build,
        _counting=counting,
    )
