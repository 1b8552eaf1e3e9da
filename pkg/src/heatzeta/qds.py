"""Quantum double suspension of spectral models and their observables.

Spectrally the suspension replaces the multiplicity at value v by the running
sum of all multiplicities up to v (Minkowski sum of the spectrum with the
number operator's 0, 1, 2, ...), keeps the kernel dimension, and raises the
summability exponent from p to p+1. On the trace side this is exactly a
product of generating functions:

  t**(p+1) Tr(exp(-t |suspend(D)|)) = (t**p Tr(exp(-t|D|))) * (t / (1 - e^-t))

which is what ``suspended_trace_expansion`` and the convolution-coherence
tests exploit. ``amplify`` applies the identical transform but tags the
result, for pipelines that need to distinguish the two constructions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import expansion as xp
from .errors import DomainError
from .spectrum import (
    Observable,
    SpectralModel,
    identity_observable,
    kernel_adjust,
    minus_projection,
    plus_projection,
)
from .trace import DEFAULT_MAX_LEVELS, closed_form_expansion, trace_expansion
from .zeta import poles_and_residues, _kernel_weight

__all__ = [
    "suspend",
    "amplify",
    "iterate",
    "SuspendedObservable",
    "tensor_suspension",
    "upper_symbol",
    "lower_symbol",
    "suspended_trace_expansion",
    "dimension_spectrum",
]


def _running_sums(arr: np.ndarray) -> np.ndarray:
    cs = np.cumsum(arr)
    if arr.dtype == np.int64 and (np.any(cs < 0) or np.any(np.diff(cs) < 0)):
        cs = np.cumsum(arr.astype(np.float64))  # int64 overflow: lose exactness
    return cs


def _suspend_like(model: SpectralModel, family: str) -> SpectralModel:
    if model.level_kind != "integer":
        raise DomainError(
            f"quantum double suspension needs integer levels; model "
            f"{model.name!r} has {model.level_kind} levels"
        )
    base = model

    def build(n: int):
        values, mp, mm = base.levels(n)
        return values.copy(), _running_sums(mp), _running_sums(mm)

    name = f"{'qds' if family == 'qds' else 'amplify'}({base.name})"
    flags = {"family": family, "qds_base": base}
    if family == "amplify":
        flags["amplification"] = True
    return SpectralModel(
        name=name,
        p=base.p + 1,
        kernel_dim=base.kernel_dim,
        level_kind="integer",
        counting_constant=base.counting_constant,
        mult_bound=(base.counting_constant, base.p_floor),
        matrix_mult=base.matrix_mult,
        flags=flags,
        _build=build,
    )


def suspend(model: SpectralModel) -> SpectralModel:
    """The quantum double suspension of an integer-level model."""
    return _suspend_like(model, "qds")


def amplify(model: SpectralModel) -> SpectralModel:
    """Identical spectral transform, tagged as an amplification."""
    return _suspend_like(model, "amplify")


def iterate(model: SpectralModel, times: int) -> SpectralModel:
    """Apply suspend repeatedly; times = 0 returns the model unchanged."""
    if not isinstance(times, int) or times < 0:
        raise DomainError("iterate needs an integer times >= 0")
    out = model
    for _ in range(times):
        out = suspend(out)
    return out


# ---------------------------------------------------------------------------
# observables of the suspended algebra

@dataclass(frozen=True)
class SuspendedObservable:
    """Observable of a suspended model, in factored form.

    kinds:
      tensor -- base_obs (x) rapid-decay diagonal ``diag`` = {n: k_n}; keeps
                the base dimension p because the second factor is trace class
      upper  -- (base plus projection) (x) Toeplitz operator; only the symbol
                mean enters the trace, raising the dimension to p+1
      lower  -- same with the base minus projection
    """

    kind: str
    base_obs: Observable | None = None
    diag: dict | None = None
    symbol_mean: object = None
    name: str = field(default="")

    def __post_init__(self):
        if self.kind not in ("tensor", "upper", "lower"):
            raise DomainError(f"unknown suspended observable kind {self.kind!r}")
        if self.kind == "tensor" and (self.base_obs is None or not self.diag):
            raise DomainError("tensor kind needs base_obs and a nonempty diag")
        if self.kind in ("upper", "lower") and self.symbol_mean is None:
            raise DomainError(f"{self.kind} kind needs symbol_mean")
        if not self.name:
            inner = (
                f"{self.base_obs.name},{sorted(self.diag.items())}"
                if self.kind == "tensor"
                else f"mean={self.symbol_mean}"
            )
            object.__setattr__(self, "name", f"susp-{self.kind}({inner})")

    def as_observable(self, suspended: SpectralModel) -> Observable:
        """Plain diagonal weights of this observable on the suspended model."""
        base = suspended.flags.get("qds_base")
        if base is None:
            raise DomainError("as_observable needs a suspended model")
        if self.kind == "tensor":
            bobs, diag = self.base_obs, self.diag

            def build(model: SpectralModel, n: int):
                bwp, bwm = bobs.weights(base, n)
                kv = np.zeros(n, dtype=np.float64)
                for idx, v in diag.items():
                    if 0 <= idx < n:
                        kv[idx] = float(v)
                return np.convolve(bwp, kv)[:n], np.convolve(bwm, kv)[:n]

            params = dict(bobs.params)
            if bobs.growth_class in ("projection", "rapid-decay"):
                # tail certificates use total mass; the support widens by the
                # reach of the diagonal factor
                kc = sum(abs(float(v)) for v in diag.values())
                if "support_max" in params:
                    params["support_max"] += max(diag)
            else:
                kc = max(abs(float(v)) for v in diag.values())
            return Observable(
                self.name,
                bobs.growth_class,
                bobs.degree,
                bobs.bound_constant * kc,
                params=params,
                _build=build,
            )
        mean = float(self.symbol_mean)
        side = 1 if self.kind == "upper" else 2

        def build(model: SpectralModel, n: int):
            _, mp, mm = base.levels(n)
            zero = np.zeros(n, dtype=np.float64)
            if side == 1:
                return np.cumsum(mp.astype(np.float64)) * mean, zero
            return zero, np.cumsum(mm.astype(np.float64)) * mean

        return Observable(self.name, "bounded", 0, abs(mean), _build=build)


def tensor_suspension(base_obs: Observable, diag: dict) -> SuspendedObservable:
    """base_obs (x) finite diagonal {n: k_n} on the number-operator factor."""
    return SuspendedObservable("tensor", base_obs=base_obs, diag=dict(diag))


def upper_symbol(mean) -> SuspendedObservable:
    """(plus projection) (x) Toeplitz operator with the given symbol mean."""
    return SuspendedObservable("upper", symbol_mean=mean)


def lower_symbol(mean) -> SuspendedObservable:
    """(minus projection) (x) Toeplitz operator with the given symbol mean."""
    return SuspendedObservable("lower", symbol_mean=mean)


def suspended_trace_expansion(
    model: SpectralModel,
    sobs: SuspendedObservable,
    order: int = 12,
) -> xp.LaurentExpansion:
    """Expansion of the suspended heat trace from base-model closed forms.

    ``model`` is the base (pre-suspension) model. The tensor kind multiplies
    the base expansion by the entire series sum_n k_n exp(-n t) and stays at
    dimension p; the symbol kinds multiply the matching projection trace by
    t/(1 - e^-t) and live at dimension p+1. A symbol with zero mean gives
    the exactly-zero expansion.
    """
    if sobs.kind == "tensor":
        inner = closed_form_expansion(model, sobs.base_obs, "exp", order + 1)
        factor = None
        for idx, v in sorted(sobs.diag.items()):
            term = xp.scale(xp.taylor_exp(-idx, order + 1), _as_scalar(v))
            factor = term if factor is None else xp.add(factor, term)
        out = xp.mul(inner, factor)
        dim = model.p
    else:
        proj = plus_projection() if sobs.kind == "upper" else minus_projection()
        inner = closed_form_expansion(model, proj, "exp", order + 2)
        tgeo = xp.shift_power(xp.geometric_expansion(order + 2), 1)
        out = xp.scale(xp.mul(inner, tgeo), _as_scalar(sobs.symbol_mean))
        dim = model.p + 1
    if out.truncation_order > order:
        out = xp.truncate(out, order)
    meta = dict(out.meta or {})
    meta.update({"source": "suspension", "kind": sobs.kind, "dimension": str(dim)})
    return xp.LaurentExpansion(
        out.leading_order, out.coeffs, out.backend, out.remainder, meta=meta
    )


def _as_scalar(v):
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    return v


# ---------------------------------------------------------------------------
# dimension spectrum

def dimension_spectrum(
    model: SpectralModel,
    observables=None,
    tol: float = 1e-6,
    order: int | None = None,
    max_levels: int = DEFAULT_MAX_LEVELS,
) -> dict:
    """Poles of zeta_b over the given observables, with residues.

    Rational-backend residues count through exact nonzeroness; a float
    residue counts only when certifiably nonzero at the tol scale, i.e.
    |residue| > max(tol, its own error bound). Returns {pole: residue}
    sorted by pole, keeping the first observable's residue when several
    share a pole.
    """
    if observables is None:
        observables = [identity_observable()]
    adj = model if model.adjusted or model.unadjusted.kernel_dim == 0 else kernel_adjust(model)
    n = order if order is not None else adj.p_floor + (2 if adj.flags.get("fit_grid") else 3)
    found: dict = {}
    for obs in observables:
        expansion = trace_expansion(adj, obs, "exp", order=n, max_levels=max_levels)
        data = poles_and_residues(expansion, model.p, _kernel_weight(model, obs))
        for k, res in data.poles.items():
            if isinstance(res, Fraction):
                keep = res != 0
            else:
                keep = abs(res.val) > max(tol, res.err)
            if keep and k not in found:
                found[k] = res
    return dict(sorted(found.items()))
