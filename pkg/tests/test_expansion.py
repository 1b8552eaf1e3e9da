"""Laurent expansion arithmetic: exact series, algebra laws, serialization.

Expected coefficient lists are hand-derived generating-function facts; each
is annotated where it is frozen.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import heatzeta.expansion as xp
from heatzeta.errors import DomainError


def frac(n, d=1):
    return Fraction(n, d)


def rational(lead, *coeffs):
    return xp.LaurentExpansion(lead, tuple(Fraction(c) for c in coeffs))


# ---------------------------------------------------------------------------
# fixed series


def test_geometric_expansion_coefficients():
    # 1/(1 - e^-t) = 1/t + 1/2 + t/12 - t^3/720 + t^5/30240 - ...
    g = xp.geometric_expansion(6)
    assert g.leading_order == -1
    assert g.truncation_order == 6
    expected = [frac(1), frac(1, 2), frac(1, 12), frac(0),
                frac(-1, 720), frac(0), frac(1, 30240), frac(0)]
    assert list(g.coeffs) == expected
    assert g.backend == xp.RATIONAL
    assert g.remainder == xp.POWER


def test_bernoulli_numbers():
    table = {0: frac(1), 1: frac(-1, 2), 2: frac(1, 6), 3: frac(0),
             4: frac(-1, 30), 6: frac(1, 42), 8: frac(-1, 30),
             10: frac(5, 66), 12: frac(-691, 2730)}
    for n, b in table.items():
        assert xp.bernoulli(n) == b


def test_taylor_exp_coefficients():
    e = xp.taylor_exp(-1, 5)
    assert e.leading_order == 0
    assert list(e.coeffs) == [frac((-1) ** k, f) for k, f in
                              enumerate([1, 1, 2, 6, 24, 120])]


def test_gaussian_decay_coefficients():
    gd = xp.gaussian_decay(1, 5)
    assert list(gd.coeffs) == [frac(1), frac(0), frac(-1), frac(0), frac(1, 2), frac(0)]


def test_series_inverse_recovers_one_minus_exp():
    g = xp.geometric_expansion(6)
    inv = xp.series_inverse(g)
    # 1 - e^-t = t - t^2/2 + t^3/6 - ...
    assert inv.leading_order == 1
    assert inv.coeffs[0] == 1
    assert inv.coeffs[1] == frac(-1, 2)
    assert inv.coeffs[2] == frac(1, 6)
    one = xp.mul(g, inv)
    assert one.leading_order == 0
    assert one.coeff(0) == 1
    assert all(one.coeff(r) == 0 for r in range(1, one.truncation_order + 1))


# ---------------------------------------------------------------------------
# coefficient access and remainder semantics


def test_coeff_below_leading_is_exact_zero():
    g = xp.geometric_expansion(4)
    c = g.coeff(-5)
    assert c == 0 and isinstance(c, Fraction)


def test_coeff_past_power_truncation_raises():
    g = xp.geometric_expansion(4)
    with pytest.raises(DomainError):
        g.coeff(5)


def test_beyond_all_orders_reads_zero_everywhere():
    b = xp.LaurentExpansion(0, (frac(1),), xp.RATIONAL, xp.BEYOND_ALL_ORDERS)
    assert b.coeff(50) == 0
    assert b.coeff(1) == 0
    t = xp.truncate(b, 3)
    assert t.remainder == xp.BEYOND_ALL_ORDERS
    assert list(t.coeffs) == [frac(1), frac(0), frac(0), frac(0)]


def test_mul_validity_tracking():
    g = xp.geometric_expansion(6)   # orders -1..6
    m = xp.mul(g, g)
    assert m.leading_order == -2
    # validity: min(6+(-1), 6+(-1)) = 5
    assert m.truncation_order == 5
    assert m.coeffs[0] == 1
    assert m.coeffs[1] == 1
    assert m.coeffs[2] == frac(5, 12)
    b = xp.LaurentExpansion(0, (frac(2),), xp.RATIONAL, xp.BEYOND_ALL_ORDERS)
    assert xp.mul(b, b).remainder == xp.BEYOND_ALL_ORDERS
    mg = xp.mul(b, g)
    assert mg.remainder == xp.POWER
    assert mg.truncation_order == 6
    assert mg.coeff(0) == 1


def test_add_truncates_to_common_validity():
    g = xp.geometric_expansion(6)
    s = xp.add(g, xp.constant(frac(1)))
    assert s.truncation_order == 0
    assert s.coeff(-1) == 1
    assert s.coeff(0) == frac(3, 2)


def test_shift_and_scale():
    g = xp.geometric_expansion(5)
    sh = xp.shift_power(g, 2)
    assert sh.leading_order == 1
    assert sh.truncation_order == 7
    assert sh.coeff(1) == 1 and sh.coeff(2) == frac(1, 2)
    sc = xp.scale(g, frac(-3))
    assert sc.coeff(-1) == -3 and sc.coeff(1) == frac(-1, 4)


# ---------------------------------------------------------------------------
# serialization and float conversion


def test_json_round_trip():
    g = xp.geometric_expansion(5)
    assert xp.LaurentExpansion.from_json_dict(g.to_json_dict()) == g
    f = xp.to_float(g)
    back = xp.LaurentExpansion.from_json_dict(f.to_json_dict())
    assert back == f
    assert back.backend == xp.FLOAT
    assert isinstance(back.coeffs[0], xp.FloatCoeff)


def test_to_float_tracks_representation_error():
    g = xp.geometric_expansion(3)
    f = xp.to_float(g)
    third = f.coeffs[2]
    assert third.val == pytest.approx(1 / 12, abs=1e-16)
    assert 0 <= third.err < 1e-16


def test_evaluate_float_matches_exact_rational_value():
    g = xp.geometric_expansion(6)
    for tq in (Fraction(1, 4), Fraction(1, 3), Fraction(7, 8)):
        exact = sum(
            c * tq ** (g.leading_order + i) for i, c in enumerate(g.coeffs)
        )
        val, err = xp.evaluate_float(g, float(tq))
        assert abs(val - float(exact)) <= err + 5e-16 * abs(float(exact))
        assert err < 1e-13


# ---------------------------------------------------------------------------
# algebra laws on random rational series

fractions_st = st.fractions(min_value=-4, max_value=4, max_denominator=12)


def expansions(min_len=1, max_len=5):
    return st.builds(
        lambda lead, coeffs: xp.LaurentExpansion(lead, tuple(coeffs)),
        st.integers(min_value=-3, max_value=3),
        st.lists(fractions_st, min_size=min_len, max_size=max_len),
    )


def common_coeffs(e, lo=None, hi=None):
    lo = e.leading_order if lo is None else lo
    hi = e.truncation_order if hi is None else hi
    return [e.coeff(r) for r in range(lo, hi + 1)]


@settings(deadline=None)
@given(expansions(), expansions())
def test_mul_commutes(a, b):
    ab, ba = xp.mul(a, b), xp.mul(b, a)
    assert ab.truncation_order == ba.truncation_order
    lo = min(ab.leading_order, ba.leading_order)
    assert common_coeffs(ab, lo) == common_coeffs(ba, lo)


@settings(deadline=None)
@given(expansions(), expansions(), expansions())
def test_mul_distributes_over_add(a, b, c):
    left = xp.mul(xp.add(a, b), c)
    right = xp.add(xp.mul(a, c), xp.mul(b, c))
    hi = min(left.truncation_order, right.truncation_order)
    lo = min(left.leading_order, right.leading_order)
    if lo > hi:
        return
    assert common_coeffs(left, lo, hi) == common_coeffs(right, lo, hi)


@settings(deadline=None)
@given(expansions(), st.fractions(min_value=-3, max_value=3, max_denominator=6))
def test_scale_is_mul_by_constant(a, c):
    direct = xp.scale(a, c)
    via_mul = xp.mul(a, xp.LaurentExpansion(0, (c,), xp.RATIONAL, xp.BEYOND_ALL_ORDERS))
    hi = min(direct.truncation_order, via_mul.truncation_order)
    lo = direct.leading_order
    assert common_coeffs(direct, lo, hi) == common_coeffs(via_mul, lo, hi)


@settings(deadline=None)
@given(expansions(), st.integers(min_value=-2, max_value=4))
def test_shift_power_moves_coefficients(a, k):
    sh = xp.shift_power(a, k)
    assert sh.leading_order == a.leading_order + k
    assert list(sh.coeffs) == list(a.coeffs)


@settings(deadline=None, max_examples=40)
@given(expansions(min_len=2, max_len=6))
def test_evaluate_float_error_bound_holds(a):
    tq = Fraction(3, 16)
    exact = sum(c * tq ** (a.leading_order + i) for i, c in enumerate(a.coeffs))
    val, err = xp.evaluate_float(a, float(tq))
    assert abs(val - float(exact)) <= err + 1e-15 * (1.0 + abs(float(exact)))
