"""End-to-end checks of the toolkit's headline identities.

Each check returns (name, passed, detail) and runs in well under a minute;
``run_all`` executes the full battery. The reference constants are frozen
from the independent oracles in the test suite (alternating-series and
Euler-Maclaurin Riemann zeta, divisor-character lattice counts); see
tests/oracles.py for the code that recomputes them.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import expansion as xp
from .qds import dimension_spectrum, iterate, suspend
from .spectrum import (
    builtin,
    get_model,
    identity_observable,
    kernel_adjust,
    torus_monomial,
)
from .trace import (
    closed_form_expansion,
    fit_expansion,
    sample_grid,
    trace_expansion,
)
from .zeta import residue_by_extrapolation, zeta_continued, zeta_data

__all__ = ["run_all", "ALL_CHECKS"]

# 2 * zeta_R(1/2); frozen from the alternating-series oracle
TWO_ZETA_HALF = -2.9207090176191736


def _res_float(res) -> float:
    return float(res) if isinstance(res, Fraction) else res.val


def check_circle_fit():
    """Fitted coefficients of t * Tr(exp(-t|D'|)) for the adjusted circle."""
    model = kernel_adjust(builtin("circle"))
    samples = sample_grid(model, t0=0.25, rho=0.5, count=12, eps=1e-14)
    fitted = fit_expansion(samples, model.p, order=3)
    exact = (2.0, 0.0, -5.0 / 6.0, 0.5)
    tols = (1e-8, 1e-6, 1e-4, 1e-3)
    errs = [abs(fitted.coeff(r).val - exact[r]) for r in range(4)]
    ok = all(e <= tol for e, tol in zip(errs, tols))
    detail = "coefficient errors vs (2, 0, -5/6, 1/2): " + ", ".join(
        f"{e:.2e}" for e in errs
    )
    return ("circle expansion fit", ok, detail)


def check_residue_law():
    """Residues from coefficients match near-pole extrapolation (Gamma(k) norm)."""
    cases = [
        (builtin("circle"), 1, 2.0),
        (suspend(builtin("circle")), 2, 2.0),
        (suspend(builtin("circle")), 1, 1.0),
    ]
    ok = True
    parts = []
    for model, k, expected in cases:
        formula = _res_float(zeta_data(model).poles[k])
        extrap, _ = residue_by_extrapolation(model, k=k)
        good = abs(formula - expected) <= 1e-6 and abs(extrap - expected) <= 1e-6
        ok = ok and good
        parts.append(
            f"{model.name} k={k}: formula {formula:.8f}, extrapolated {extrap:.8f}"
        )
    return ("residue law", ok, "; ".join(parts))


def check_continuation_oracle():
    """Special values: number operator at 0 and -1, circle at 1/2."""
    num = builtin("number_op")
    z0 = zeta_continued(num, s=0.0).value.real
    zm1 = zeta_continued(num, s=-1.0).value.real
    zh = zeta_continued(builtin("circle"), s=0.5, eps=1e-9).value.real
    e0 = abs(z0 + 0.5)
    e1 = abs(zm1 + 1.0 / 12.0)
    eh = abs(zh - TWO_ZETA_HALF)
    ok = e0 <= 1e-7 and e1 <= 1e-7 and eh <= 1e-6
    detail = (
        f"zeta(0) = {z0:.10f} (err {e0:.1e}), zeta(-1) = {zm1:.10f} (err {e1:.1e}), "
        f"circle zeta(1/2) = {zh:.10f} vs 2*zeta_R(1/2) = {TWO_ZETA_HALF} (err {eh:.1e})"
    )
    return ("continuation special values", ok, detail)


def check_gauss_conversion():
    """gauss_to_exp recovers the circle's exponential coefficients."""
    from .zeta import dprime_zeta_evaluator, gauss_to_exp

    circle = builtin("circle")
    adj = kernel_adjust(circle)
    g = closed_form_expansion(adj, identity_observable(), "gauss", 3)
    conv = gauss_to_exp(g, circle.p, dprime_zeta_evaluator(circle), order=3)
    exact = (2.0, 0.0, -5.0 / 6.0, 0.5)
    errs = [abs(conv.coeff(r).val - exact[r]) for r in range(4)]
    ok = all(e <= 1e-8 for e in errs)
    return (
        "gaussian-to-exponential conversion",
        ok,
        "coefficient errors: " + ", ".join(f"{e:.2e}" for e in errs),
    )


def check_suspension_stability():
    """Dimension spectrum of a suspension = base spectrum + one new top pole."""
    ok = True
    parts = []
    for name in ("circle", "number_op", "sphere_torus(1)"):
        m = get_model(name)
        base_spec = dimension_spectrum(m)
        susp_spec = dimension_spectrum(suspend(m))
        new_top = m.p_floor + 1
        good = (
            set(susp_spec) == set(base_spec) | {new_top}
            and max(susp_spec) == max(base_spec) + 1
        )
        ok = ok and good
        parts.append(f"{name}: {sorted(base_spec)} -> {sorted(susp_spec)}")
    return ("suspension stability", ok, "; ".join(parts))


def check_sphere_identification():
    """Iterated suspension of the circle is the sphere family, exactly."""
    import numpy as np

    ok = True
    parts = []
    for ell in (1, 2, 3):
        it = iterate(builtin("circle"), ell)
        sp = builtin("sphere_torus", ell)
        v1, p1, m1 = it.levels(51)
        v2, p2, m2 = sp.levels(51)
        same = (
            np.array_equal(v1, v2)
            and np.array_equal(p1, p2)
            and np.array_equal(m1, m2)
        )
        spec = dimension_spectrum(sp)
        residues_ok = set(spec) == set(range(1, ell + 2)) and all(
            abs(_res_float(r)) > 1e-6 for r in spec.values()
        )
        ok = ok and same and residues_ok
        parts.append(f"ell={ell}: multisets {'==' if same else '!='}, poles {sorted(spec)}")
    eq_spec = dimension_spectrum(builtin("sphere_eq", 1))
    ok = ok and set(eq_spec) == {1, 2, 3}
    parts.append(f"sphere_eq(1) poles {sorted(eq_spec)}")
    return ("sphere identification", ok, "; ".join(parts))


def check_nc_torus():
    """Flat-torus constants: pi/2 (Gaussian monomial), 4*pi (leading and residue)."""
    torus = builtin("nc_torus")
    m2 = torus_monomial(2, 0)
    samples = sample_grid(torus, m2, t0=0.5, rho=0.5, count=6, kernel="gauss", eps=1e-12)
    fitted = fit_expansion(samples, torus.p, order=2, leading_order=-2)
    scalar_lead = fitted.coeff(-2).val / torus.matrix_mult
    e_gauss = abs(scalar_lead - math.pi / 2.0)

    exp_fit = trace_expansion(kernel_adjust(torus), order=4)
    a0 = exp_fit.coeff(0).val
    e_lead = abs(a0 - 4.0 * math.pi)

    res2 = _res_float(zeta_data(torus).poles[2])
    e_res = abs(res2 - 4.0 * math.pi)

    ok = e_gauss <= 1e-4 and e_lead <= 1e-3 and e_res <= 1e-3
    detail = (
        f"gaussian m^2 leading/2 = {scalar_lead:.8f} vs pi/2 (err {e_gauss:.1e}); "
        f"exp leading = {a0:.8f} vs 4*pi (err {e_lead:.1e}); "
        f"residue at 2 = {res2:.8f} vs 4*pi (err {e_res:.1e})"
    )
    return ("nc torus constants", ok, detail)


def check_convolution_law():
    """Suspended expansion = base expansion * geometric series, exactly."""
    order = 8
    ok = True
    parts = []
    for name in ("circle", "number_op", "sphere_torus(1)", "sphere_eq(1)"):
        m = get_model(name)
        lhs = closed_form_expansion(suspend(m), identity_observable(), "exp", order)
        prod = xp.shift_power(
            xp.mul(
                closed_form_expansion(m, identity_observable(), "exp", order + 2),
                xp.geometric_expansion(order + 2),
            ),
            1,
        )
        rhs = xp.truncate(prod, lhs.truncation_order)
        good = lhs.backend == xp.RATIONAL and all(
            lhs.coeff(r) == rhs.coeff(r)
            for r in range(lhs.leading_order, lhs.truncation_order + 1)
        )
        ok = ok and good
        parts.append(f"{name}: {'exact' if good else 'MISMATCH'}")
    # independent route: the suspended circle against the sphere closed form
    lhs = closed_form_expansion(suspend(builtin("circle")), identity_observable(), "exp", order)
    rhs = closed_form_expansion(builtin("sphere_torus", 1), identity_observable(), "exp", order)
    cross = all(
        lhs.coeff(r) == rhs.coeff(r)
        for r in range(min(lhs.leading_order, rhs.leading_order), order + 1)
    )
    ok = ok and cross
    parts.append(f"qds(circle) vs sphere_torus(1): {'exact' if cross else 'MISMATCH'}")
    return ("convolution law", ok, "; ".join(parts))


def check_mellin_robustness():
    """Split-point independence (1e-9) and residue extrapolation (1e-5)."""
    models = [
        builtin("circle"),
        builtin("number_op"),
        builtin("sphere_torus", 1),
        builtin("sphere_torus", 2),
        builtin("sphere_torus", 3),
        builtin("sphere_eq", 1),
        builtin("nc_torus"),
    ]
    ok = True
    parts = []
    for m in models:
        s = float(m.p) + 1.0 / 3.0
        z1 = zeta_continued(m, s=s, split=1.0, eps=1e-10)
        z2 = zeta_continued(m, s=s, split=2.0, eps=1e-10)
        split_diff = abs(z1.value - z2.value)
        good = split_diff < 1e-9
        worst = 0.0
        for k, res in dimension_spectrum(m).items():
            extrap, _ = residue_by_extrapolation(m, k=k)
            worst = max(worst, abs(extrap - _res_float(res)))
        good = good and worst < 1e-5
        ok = ok and good
        parts.append(f"{m.name}: split diff {split_diff:.1e}, residue diff {worst:.1e}")
    return ("mellin robustness", ok, "; ".join(parts))


ALL_CHECKS = [
    check_circle_fit,
    check_residue_law,
    check_continuation_oracle,
    check_gauss_conversion,
    check_suspension_stability,
    check_sphere_identification,
    check_nc_torus,
    check_convolution_law,
    check_mellin_robustness,
]


def run_all():
    """Run every check; returns a list of (name, passed, detail)."""
    return [f() for f in ALL_CHECKS]
