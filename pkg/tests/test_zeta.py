"""Zeta-side: gamma, certified Dirichlet sums, meromorphic continuation.

Every numeric expectation traces to oracles.py (accelerated alternating
series, Euler-Maclaurin, quadrature) or to an exact rational identity.
"""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as oc
import heatzeta.expansion as xp
from heatzeta import spectrum as sp, trace as tr, zeta as zt
from heatzeta.errors import (
    DomainError,
    GammaPoleError,
    MissingZetaValueError,
    PoleProximityError,
    ResourceBudgetError,
)


def circle():
    return sp.builtin("circle")


# ---------------------------------------------------------------------------
# gamma


def test_gamma_integers_and_half():
    assert zt.gamma(1.0) == pytest.approx(1.0, rel=1e-14)
    assert zt.gamma(5.0) == pytest.approx(24.0, rel=1e-13)
    assert abs(zt.gamma(0.5) - oc.GAMMA_HALF) < 1e-10  # quadrature oracle
    assert zt.gamma(3.5) == pytest.approx(2.5 * 1.5 * 0.5 * oc.GAMMA_HALF, rel=1e-13)


@pytest.mark.parametrize("bad", [0.0, -1.0, -7.0])
def test_gamma_pole_raises(bad):
    with pytest.raises(GammaPoleError):
        zt.gamma(bad)


@settings(deadline=None, max_examples=60)
@given(st.floats(min_value=0.02, max_value=0.98).filter(lambda x: abs(x - 0.5) > 1e-3),
       st.floats(min_value=-3.0, max_value=3.0))
def test_gamma_reflection_identity(sig, tau):
    s = complex(sig, tau)
    lhs = zt.gamma(s) * zt.gamma(1 - s) * complex(math.sin(math.pi * sig) * math.cosh(math.pi * tau),
                                                 math.cos(math.pi * sig) * math.sinh(math.pi * tau))
    assert abs(lhs / math.pi - 1) < 1e-10


@settings(deadline=None, max_examples=60)
@given(st.floats(min_value=0.1, max_value=20.0))
def test_gamma_duplication_identity(s):
    lhs = zt.gamma(s) * zt.gamma(s + 0.5)
    rhs = 2.0 ** (1.0 - 2.0 * s) * oc.GAMMA_HALF * zt.gamma(2.0 * s)
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


# ---------------------------------------------------------------------------
# direct Dirichlet sums


def test_direct_circle_values():
    # at s = 2 the tail only decays like 1/V, so ask for a budget-friendly eps
    z2 = zt.zeta_direct(circle(), s=2.0, eps=1e-6)
    assert z2.abs_error <= 1e-6
    assert abs(z2.value.real - 2.0 * oc.ZETA_2) <= z2.abs_error + 1e-13
    z3 = zt.zeta_direct(circle(), s=3.0, eps=1e-11)
    assert abs(z3.value.real - oc.TWO_ZETA_3) <= z3.abs_error + 1e-13
    assert z3.method == "direct"


def test_direct_number_op_is_riemann_zeta():
    for s, eps in ((2.0, 1e-6), (3.25, 1e-11), (6.0, 1e-11)):
        zv = zt.zeta_direct(sp.builtin("number_op"), s=s, eps=eps)
        assert abs(zv.value.real - oc.zeta_real(s)) <= zv.abs_error + 1e-13


def test_direct_sphere_value():
    zv = zt.zeta_direct(sp.builtin("sphere_torus", 1), s=4.0, eps=1e-11)
    assert abs(zv.value.real - oc.SPHERE_S4) <= zv.abs_error + 1e-13


def test_direct_torus_is_epstein():
    zv = zt.zeta_direct(sp.builtin("nc_torus"), s=10.0, eps=1e-10)
    assert abs(zv.value.real - oc.torus_zeta(10.0)) <= zv.abs_error + 1e-12


def test_direct_complex_point():
    s = 3.0 + 1.5j
    zv = zt.zeta_direct(circle(), s=s, eps=1e-11)
    want = 2.0 * oc.zeta_alternating(s)
    assert abs(zv.value - want) <= zv.abs_error + 1e-12


def test_direct_observable_weighted():
    # b = |D| on the number operator: sum k * k^-s = zeta(s-1)
    zv = zt.zeta_direct(sp.builtin("number_op"), sp.abs_value_observable(), s=4.0, eps=1e-11)
    assert abs(zv.value.real - oc.zeta_real(3.0)) <= zv.abs_error + 1e-13


def test_direct_abscissa_gate():
    with pytest.raises(DomainError):
        zt.zeta_direct(circle(), s=1.2)
    with pytest.raises(DomainError):
        zt.zeta_direct(sp.builtin("nc_torus"), s=2.2)


def test_direct_budget_error_reports_achieved_bound():
    with pytest.raises(ResourceBudgetError) as info:
        zt.zeta_direct(circle(), s=2.5, eps=1e-14, max_levels=300)
    assert 0 < info.value.achieved_bound < 1e-2


# ---------------------------------------------------------------------------
# exact limits and rational pole data


def test_number_op_exact_limits():
    z0 = zt.zeta_continued(sp.builtin("number_op"), s=0.0)
    assert z0.method == "exact-limit"
    assert z0.meta["value"] == Fraction(-1, 2)
    assert abs(z0.value.real + 0.5) < 1e-15
    zm1 = zt.zeta_continued(sp.builtin("number_op"), s=-1.0)
    assert zm1.meta["value"] == Fraction(-1, 12)
    # acceptance tolerances
    assert abs(z0.value.real - (-0.5)) < 1e-7
    assert abs(zm1.value.real - (-1.0 / 12.0)) < 1e-7


def test_circle_exact_limits():
    # zeta_circle(0) = 2 zeta_R(0) = -1, zeta_circle(-1) = 2 zeta_R(-1) = -1/6
    z0 = zt.zeta_continued(circle(), s=0.0)
    assert z0.meta["value"] == Fraction(-1)
    zm1 = zt.zeta_continued(circle(), s=-1.0)
    assert zm1.meta["value"] == Fraction(-1, 6)
    zm2 = zt.zeta_continued(circle(), s=-2.0)
    assert zm2.meta["value"] == Fraction(0)  # trivial zero of zeta_R at -2


def test_circle_pole_data_is_exact():
    d = zt.zeta_data(circle())
    assert d.poles == {1: Fraction(2)}
    assert d.value_at_zero == Fraction(-1)
    assert d.kernel_weight == 1.0
    assert d.residue(1) == Fraction(2)


def test_sphere2_pole_data_is_exact():
    d = zt.zeta_data(sp.builtin("sphere_torus", 2))
    assert d.poles == {3: Fraction(1), 2: Fraction(2), 1: Fraction(1)}
    # zeta(-2) + 2 zeta(-1) + zeta(0) + 1 - 1 = -2/3
    assert d.value_at_zero == Fraction(-2, 3)


def test_zeta_data_json_tags_exact_values():
    doc = zt.zeta_data(circle()).to_json_dict()
    assert doc["poles"]["1"] == {"num": 2, "den": 1, "exact": True}
    assert doc["zeta_at_zero"] == {"num": -1, "den": 1, "exact": True}
    assert doc["p"] == {"num": 1, "den": 1}


def test_fractional_dimension_pole_keys():
    toy = xp.LaurentExpansion(0, (Fraction(2),))
    data = zt.poles_and_residues(toy, Fraction(3, 2))
    (key, res), = data.poles.items()
    assert key == Fraction(3, 2)
    assert res.val == pytest.approx(2.0 / (0.5 * oc.GAMMA_HALF), rel=1e-12)
    assert data.value_at_zero == 0  # fractional p: no constant term survives


def test_value_at_zero_needs_enough_orders():
    short = xp.LaurentExpansion(0, (Fraction(1),))
    with pytest.raises(DomainError):
        zt.poles_and_residues(short, 2)


# ---------------------------------------------------------------------------
# continuation engine


def test_continued_circle_at_half():
    zv = zt.zeta_continued(circle(), s=0.5, eps=1e-9)
    assert zv.method == "continued"
    assert abs(zv.value.real - oc.TWO_ZETA_HALF) <= zv.abs_error + 1e-12
    assert zv.abs_error < 1e-9
    assert abs(zv.value.imag) < 1e-12


def test_continued_number_op_below_abscissa():
    for s in (0.25, 0.75):
        zv = zt.zeta_continued(sp.builtin("number_op"), s=s, eps=1e-9)
        assert abs(zv.value.real - oc.zeta_real(s)) <= zv.abs_error + 1e-12


def test_continued_torus_against_epstein_factorization():
    zv = zt.zeta_continued(sp.builtin("nc_torus"), s=3.0, eps=1e-7)
    assert abs(zv.value.real - oc.torus_zeta(3.0)) <= zv.abs_error + 1e-9


def test_split_point_independence():
    for name, ell in [("circle", None), ("number_op", None), ("sphere_torus", 1)]:
        m = sp.builtin(name) if ell is None else sp.builtin(name, ell)
        s = float(m.p) + 0.4
        a = zt.zeta_continued(m, s=s, eps=1e-10, split=1.0)
        b = zt.zeta_continued(m, s=s, eps=1e-10, split=2.0)
        assert abs(a.value - b.value) < 1e-9, m.name


def test_pole_guard():
    with pytest.raises(PoleProximityError):
        zt.zeta_continued(circle(), s=1.0005)
    with pytest.raises(PoleProximityError):
        zt.zeta_continued(sp.builtin("sphere_torus", 1), s=2.0 + 1e-5j)


def test_continued_complex_point_matches_direct():
    s = 3.2 + 1.1j
    a = zt.zeta_continued(circle(), s=s, eps=1e-9)
    b = zt.zeta_direct(circle(), s=s, eps=1e-10)
    assert abs(a.value - b.value) < 1e-8


def _window_points(rng, lo, hi, n=10, complex_count=3):
    pts = []
    for i in range(n):
        sig = rng.uniform(lo, hi)
        tau = rng.uniform(-2.0, 2.0) if i < complex_count else 0.0
        pts.append(complex(sig, tau))
    return pts


@pytest.mark.parametrize("spec,window", [
    ("circle", (3.0, 6.0)),
    ("number_op", (3.0, 6.0)),
    ("sphere_torus(1)", (4.0, 7.0)),
])
def test_continuation_agrees_with_direct_at_random_points(spec, window):
    m = sp.get_model(spec)
    rng = random.Random(f"heatzeta-{spec}")
    for s in _window_points(rng, *window):
        s_arg = s if s.imag else s.real
        a = zt.zeta_continued(m, s=s_arg, eps=1e-9)
        b = zt.zeta_direct(m, s=s_arg, eps=1e-10)
        assert abs(a.value - b.value) < 1e-8, s


def test_continuation_agrees_with_direct_torus():
    m = sp.builtin("nc_torus")
    rng = random.Random("heatzeta-torus")
    for s in _window_points(rng, 5.0, 8.0, n=4, complex_count=0):
        a = zt.zeta_continued(m, s=s.real, eps=1e-7)
        b = zt.zeta_direct(m, s=s.real, eps=1e-9)
        assert abs(a.value - b.value) < max(1e-8, 2 * a.abs_error), s


# ---------------------------------------------------------------------------
# residues


def test_residue_formula_circle():
    val, est = zt.residue_by_extrapolation(circle(), k=1)
    assert abs(val - 2.0) <= est + 1e-9
    assert abs(val - 2.0) < 1e-6


def test_residue_formula_sphere2():
    val, est = zt.residue_by_extrapolation(sp.builtin("sphere_torus", 2), k=2)
    assert abs(val - 2.0) < 1e-5
    val3, _ = zt.residue_by_extrapolation(sp.builtin("sphere_torus", 2), k=3)
    assert abs(val3 - 1.0) < 1e-5


def test_dprime_evaluator_points():
    ev = zt.dprime_zeta_evaluator(circle())
    v0, e0 = ev(0)
    v1, e1 = ev(1)
    assert abs(v0 - 0.0) <= e0 + 1e-12   # 2 zeta(0) + 1
    assert abs(v1 - 5.0 / 6.0) <= e1 + 1e-12  # 2 zeta(-1) + 1


# ---------------------------------------------------------------------------
# gaussian-to-exponential conversion


def test_gauss_to_exp_circle_chain():
    adj = sp.kernel_adjust(circle())
    g = tr.closed_form_expansion(adj, sp.identity_observable(), "gauss", 3)
    out = zt.gauss_to_exp(g, circle().p, zt.dprime_zeta_evaluator(circle()), order=3)
    want = [2.0, 0.0, -5.0 / 6.0, 0.5]
    for c, w in zip(out.coeffs, want):
        assert abs(c.val - w) < 1e-8
        assert abs(c.val - w) <= c.err + 1e-12


def test_gauss_to_exp_requires_evaluator_for_odd_points():
    adj = sp.kernel_adjust(circle())
    g = tr.closed_form_expansion(adj, sp.identity_observable(), "gauss", 3)
    with pytest.raises(MissingZetaValueError) as info:
        zt.gauss_to_exp(g, circle().p, None, order=3)
    assert info.value.points == [-1]
