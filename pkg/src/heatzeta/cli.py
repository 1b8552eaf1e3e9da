"""Command-line front end.

Verbs: models, trace, expand, zeta, dimspec, suspend, verify. Reports are
JSON (byte-identical across runs with the same config: sorted keys, fixed
separators, trailing newline) or CSV for plot data. Every computed number is
emitted together with an absolute error bound or an ``"exact": true`` tag.

Exit codes: 0 success, 2 domain errors (bad inputs, unknown names, pole
proximity), 3 resource errors (budget exhausted before certification).
Configs can be given as a TOML file (``--config``); command-line flags
override file values. ``WHKAE_THREADS`` caps worker parallelism and
``WHKAE_BACKEND`` selects the summation backend.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields
from fractions import Fraction

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib

from . import __version__
from .errors import DomainError, HeatzetaError, ResourceBudgetError
from .expansion import FloatCoeff, LaurentExpansion
from .qds import dimension_spectrum, iterate
from .spectrum import BUILTIN_MODELS, get_model, get_observable
from .trace import (
    DEFAULT_MAX_LEVELS,
    default_fit_grid,
    sample_grid,
    samples_to_csv,
    trace_expansion,
)
from .verify import run_all
from .zeta import zeta_continued, zeta_data, zeta_direct

__all__ = ["RunConfig", "main"]


@dataclass
class RunConfig:
    """One deterministic run description; round-trips through TOML exactly."""

    model: str = "circle"
    obs: str = "identity"
    kernel: str = "exp"
    t0: float = 0.25
    rho: float = 0.5
    count: int = 12
    eps: float = 1e-10
    order: int | None = None
    s: list = field(default_factory=list)
    times: int = 1
    out: str = "json"
    budget_levels: int = DEFAULT_MAX_LEVELS

    def __post_init__(self):
        if not self.eps > 0:
            raise DomainError("eps must be > 0")
        if not (0.0 < self.rho < 1.0):
            raise DomainError("rho must lie in (0, 1)")
        if not self.t0 > 0:
            raise DomainError("t0 must be > 0")
        if self.count < 1 or self.budget_levels < 1:
            raise DomainError("count and budget-levels must be >= 1")
        if self.kernel not in ("exp", "gauss"):
            raise DomainError("kernel must be 'exp' or 'gauss'")
        if self.out not in ("json", "csv"):
            raise DomainError("out must be 'json' or 'csv'")
        if self.times < 0:
            raise DomainError("times must be >= 0")
        self.s = [float(x) for x in self.s]

    def to_toml(self) -> str:
        """TOML text that parses back to an equal config (shortest floats)."""
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            if isinstance(v, bool):
                lines.append(f"{f.name} = {str(v).lower()}")
            elif isinstance(v, str):
                lines.append(f'{f.name} = "{v}"')
            elif isinstance(v, float):
                lines.append(f"{f.name} = {_toml_float(v)}")
            elif isinstance(v, int):
                lines.append(f"{f.name} = {v}")
            elif isinstance(v, list):
                lines.append(f"{f.name} = [{', '.join(_toml_float(x) for x in v)}]")
            else:
                raise DomainError(f"cannot serialize config field {f.name}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_toml(cls, text: str) -> "RunConfig":
        data = tomllib.loads(text)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def _toml_float(x: float) -> str:
    r = repr(float(x))
    if "." not in r and "e" not in r and "inf" not in r and "nan" not in r:
        r += ".0"
    return r


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")


def _ser_number(x) -> dict:
    """Serialize with an error bound or an exactness tag."""
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator, "exact": True}
    if isinstance(x, FloatCoeff):
        return {"val": x.val, "err": x.err}
    if isinstance(x, int):
        return {"num": x, "den": 1, "exact": True}
    return {"val": float(x), "err": 0.0, "exact": True}


def _ser_expansion(e: LaurentExpansion) -> dict:
    return {
        "leading_order": e.leading_order,
        "coeffs": [_ser_number(c) for c in e.coeffs],
        "remainder": e.remainder,
        "backend": e.backend,
    }


# ---------------------------------------------------------------------------
# verbs

def cmd_models(cfg: RunConfig) -> int:
    _emit({"models": dict(BUILTIN_MODELS)})
    return 0


def cmd_trace(cfg: RunConfig) -> int:
    model = get_model(cfg.model)
    obs = get_observable(cfg.obs)
    samples = sample_grid(
        model,
        obs,
        t0=cfg.t0,
        rho=cfg.rho,
        count=cfg.count,
        kernel=cfg.kernel,
        eps=cfg.eps,
        max_levels=cfg.budget_levels,
    )
    if cfg.out == "csv":
        sys.stdout.write(samples_to_csv(samples))
        return 0
    _emit(
        {
            "model": model.name,
            "observable": obs.name,
            "kernel": cfg.kernel,
            "samples": [
                {
                    "t": s.t,
                    "value": {"val": s.value, "err": s.abs_error},
                    "met_target": s.met_target,
                }
                for s in samples
            ],
        }
    )
    return 0


def cmd_expand(cfg: RunConfig) -> int:
    model = get_model(cfg.model)
    obs = get_observable(cfg.obs)
    if cfg.order is not None:
        order = cfg.order
    elif model.flags.get("fit_grid"):
        # fitted models: stay within the grid their sampling budget supports
        order = default_fit_grid(model)["count"] - 2
    else:
        order = 6
    exp = trace_expansion(model, obs, cfg.kernel, order, max_levels=cfg.budget_levels)
    _emit(
        {
            "model": model.name,
            "observable": obs.name,
            "kernel": cfg.kernel,
            "order": order,
            "source": (exp.meta or {}).get("source"),
            "expansion": _ser_expansion(exp),
        }
    )
    return 0


def _direct_is_cheap(model, obs, sigma: float, eps: float, budget: int) -> bool:
    """Conservative feasibility estimate for the certified direct sum."""
    base = model.unadjusted
    m = obs.degree + float(base.p)
    if sigma <= m + 0.3:
        return False
    tail_c = sigma * obs.bound_constant * base.counting_constant * 2.0**m / (sigma - m)
    try:
        v_needed = (2.0 * tail_c / eps) ** (1.0 / (sigma - m))
    except OverflowError:
        return False
    v_needed = max(2.0 * v_needed, 32.0)  # doubling overshoot
    levels = v_needed * v_needed if base.level_kind == "lattice" else v_needed
    return levels <= budget


def cmd_zeta(cfg: RunConfig) -> int:
    model = get_model(cfg.model)
    obs = get_observable(cfg.obs)
    if not cfg.s:
        raise DomainError("zeta needs at least one --s value")
    data = zeta_data(
        model, obs, order=cfg.order, eps=cfg.eps, max_levels=cfg.budget_levels
    )
    samples = []
    for sv in cfg.s:
        if _direct_is_cheap(model, obs, sv, cfg.eps, cfg.budget_levels):
            zv = zeta_direct(model, obs, sv, eps=cfg.eps, max_levels=cfg.budget_levels)
        else:
            zv = zeta_continued(
                model,
                obs,
                sv,
                eps=cfg.eps,
                order=cfg.order,
                max_levels=cfg.budget_levels,
            )
        samples.append(
            {
                "s": sv,
                "value": {
                    "re": zv.value.real,
                    "im": zv.value.imag,
                    "err": zv.abs_error,
                },
                "method": zv.method,
            }
        )
    doc = data.to_json_dict()
    doc.update(
        {
            "model": model.name,
            "observable": obs.name,
            "samples": samples,
        }
    )
    _emit(doc)
    return 0


def cmd_dimspec(cfg: RunConfig) -> int:
    model = get_model(cfg.model)
    obs = get_observable(cfg.obs)
    spec = dimension_spectrum(
        model, [obs], order=cfg.order, max_levels=cfg.budget_levels
    )
    _emit(
        {
            "model": model.name,
            "observable": obs.name,
            "p": {"num": model.p.numerator, "den": model.p.denominator},
            "poles": {str(k): _ser_number(v) for k, v in sorted(spec.items())},
        }
    )
    return 0


def cmd_suspend(cfg: RunConfig) -> int:
    base = get_model(cfg.model)
    derived = iterate(base, cfg.times)
    show = min(10, cfg.count)
    v, mp, mm = derived.levels(show)
    _emit(
        {
            "base": base.name,
            "model": derived.name,
            "times": cfg.times,
            "p": {"num": derived.p.numerator, "den": derived.p.denominator},
            "kernel_dim": derived.kernel_dim,
            "counting_constant": derived.counting_constant,
            "levels": [
                {"v": float(v[k]), "mp": int(mp[k]), "mm": int(mm[k])}
                for k in range(show)
            ],
            "exact": True,
        }
    )
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    results = run_all()
    width = max(len(name) for name, _, _ in results)
    failed = 0
    for name, passed, detail in results:
        tag = "PASS" if passed else "FAIL"
        failed += 0 if passed else 1
        sys.stdout.write(f"{tag}  {name:<{width}}  {detail}\n")
    sys.stdout.write(
        f"{len(results) - failed}/{len(results)} checks passed\n"
    )
    return 0 if failed == 0 else 1


_VERBS = {
    "models": cmd_models,
    "trace": cmd_trace,
    "expand": cmd_expand,
    "zeta": cmd_zeta,
    "dimspec": cmd_dimspec,
    "suspend": cmd_suspend,
    "verify": cmd_verify,
}


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="heatzeta",
        description="heat traces, zeta continuation and double suspensions "
        "for explicit spectral data",
    )
    ap.add_argument("--version", action="version", version=f"heatzeta {__version__}")
    ap.add_argument("verb", choices=sorted(_VERBS))
    ap.add_argument("--config", help="TOML config file; flags override its values")
    ap.add_argument("--model", help="model spec, e.g. circle, sphere_torus(2), qds(circle)")
    ap.add_argument("--obs", help="observable spec, e.g. identity, P, m2, e3")
    ap.add_argument("--kernel", choices=("exp", "gauss"))
    ap.add_argument("--t0", type=float, help="largest grid time")
    ap.add_argument("--rho", type=float, help="geometric grid ratio in (0,1)")
    ap.add_argument("--count", type=int, help="number of grid points / listed levels")
    ap.add_argument("--eps", type=float, help="target absolute error")
    ap.add_argument("--order", type=int, help="expansion truncation order")
    ap.add_argument(
        "--s",
        action="append",
        type=float,
        help="zeta evaluation point (repeatable)",
    )
    ap.add_argument("--times", type=int, help="suspension iterations")
    ap.add_argument("--out", choices=("json", "csv"), help="output format")
    ap.add_argument("--budget-levels", type=int, help="max enumerated levels")
    return ap


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = RunConfig.from_toml(fh.read())
    else:
        cfg = RunConfig()
    overrides = {
        "model": args.model,
        "obs": args.obs,
        "kernel": args.kernel,
        "t0": args.t0,
        "rho": args.rho,
        "count": args.count,
        "eps": args.eps,
        "order": args.order,
        "s": args.s,
        "times": args.times,
        "out": args.out,
        "budget_levels": args.budget_levels,
    }
    for key, val in overrides.items():
        if val is not None:
            setattr(cfg, key, val)
    cfg.__post_init__()
    return cfg


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return _VERBS[args.verb](cfg)
    except ResourceBudgetError as exc:
        sys.stderr.write(f"resource error: {exc}\n")
        return 3
    except DomainError as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return 2
    except HeatzetaError as exc:  # any other typed failure counts as domain
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
