"""Spectral models: level data, counting functions, adjustment, observables.

Multiplicity expectations come from the brute-force counters in oracles.py.
"""

import numpy as np
import pytest

import oracles as oc
from heatzeta import spectrum as sp
from heatzeta.errors import DomainError, ResourceBudgetError, UnknownModelError, UnknownObservableError


# ---------------------------------------------------------------------------
# builtin level structure


def test_circle_levels_and_counting():
    c = sp.builtin("circle")
    v, mp, mm = c.levels(8)
    assert v.tolist() == list(range(8))
    assert (mp + mm).tolist() == [1] + [2] * 7
    assert c.kernel_dim == 1
    # counting: eigenvalues k in Z with |k| <= lam
    assert [c.counting(x) for x in (0, 0.5, 1, 2.5, 10)] == [1, 1, 3, 5, 21]


def test_number_op_levels():
    n = sp.builtin("number_op")
    v, mp, mm = n.levels(6)
    assert (mp + mm).tolist() == [1] * 6
    assert mm.tolist() == [0] * 6
    assert n.counting(4.7) == 5


def test_torus_shells_match_divisor_oracle():
    t = sp.builtin("nc_torus")
    count = 20001
    v, mp, mm = t.levels(count)
    for k in list(range(200)) + [720, 1105, 9409, 19999, 20000]:
        assert mp[k] + mm[k] == t.matrix_mult * oc.r2_divisor(k), k
    assert v.tolist() == pytest.approx([np.sqrt(k) for k in range(count)])
    # counting includes every lattice point with norm <= lam, kernel included
    assert t.counting(3.0) == 2 * sum(oc.r2_divisor(k) for k in range(10))


def test_sphere_torus_multiplicities_match_binomial_oracle():
    for ell in (1, 2, 3):
        m = sp.builtin("sphere_torus", ell)
        v, mp, mm = m.levels(51)
        for k in range(51):
            assert mp[k] + mm[k] == oc.sphere_total_mult(ell, k)
        assert m.p == ell + 1
        assert m.kernel_dim == 1


def test_sphere_eq_totals():
    m = sp.builtin("sphere_eq", 1)
    v, mp, mm = m.levels(40)
    assert (mp + mm).tolist() == [1] + [(k + 1) ** 2 for k in range(1, 40)]
    assert m.p == 3


def test_builtin_is_memoized():
    assert sp.builtin("circle") is sp.builtin("circle")
    assert sp.builtin("sphere_torus", 2) is sp.builtin("sphere_torus", 2)


def test_unknown_model_raises():
    with pytest.raises(UnknownModelError):
        sp.builtin("moebius")
    with pytest.raises(DomainError):
        sp.get_model("sphere_torus(0)")  # recognized family, bad parameter


# ---------------------------------------------------------------------------
# envelopes


@pytest.mark.parametrize("name,ell", [("circle", None), ("number_op", None),
                                      ("sphere_torus", 1), ("sphere_torus", 3),
                                      ("sphere_eq", 1)])
def test_mult_bound_envelope_holds(name, ell):
    m = sp.builtin(name) if ell is None else sp.builtin(name, ell)
    cmult, deg = m.mult_bound
    v, mp, mm = m.levels(400)
    assert np.all(mp + mm <= cmult * (1.0 + v) ** deg + 1e-9)


def test_torus_mult_bound_envelope_holds():
    t = sp.builtin("nc_torus")
    cmult, deg = t.mult_bound
    v, mp, mm = t.levels(20001)
    assert np.all(mp + mm <= cmult * (1.0 + v) ** deg + 1e-9)


@pytest.mark.parametrize("name,ell", [("circle", None), ("number_op", None),
                                      ("sphere_torus", 2), ("sphere_eq", 1),
                                      ("nc_torus", None)])
def test_counting_constant_envelope_holds(name, ell):
    # N(lambda) <= C lambda^p for lambda >= 10
    m = sp.builtin(name) if ell is None else sp.builtin(name, ell)
    for lam in (10.0, 14.5, 21.0, 40.0):
        assert m.counting(lam) <= m.counting_constant * lam ** float(m.p)


# ---------------------------------------------------------------------------
# kernel adjustment


def test_kernel_adjust_moves_zero_modes_to_one():
    c = sp.builtin("circle")
    adj = sp.kernel_adjust(c)
    v, mp, mm = adj.levels(4)
    assert adj.adjusted and adj.kernel_dim == 0
    assert mp.tolist() == [0, 2, 1, 1]
    assert mm.tolist() == [0, 1, 1, 1]
    assert adj.counting(0.0) == 0
    assert adj.counting(1.0) == 3
    assert adj.counting_constant == c.counting_constant + c.kernel_dim
    assert sp.kernel_adjust(c) is adj  # memoized
    assert adj.unadjusted is c


def test_kernel_adjust_torus():
    t = sp.builtin("nc_torus")
    adj = sp.kernel_adjust(t)
    v, mp, mm = adj.levels(3)
    assert mp.tolist()[0] == 0
    assert mp[1] + mm[1] == 2 * oc.r2_divisor(1) + t.kernel_dim
    assert adj.min_positive_value == 1.0


def test_kernel_adjust_of_adjusted_is_noop():
    adj = sp.kernel_adjust(sp.builtin("circle"))
    again = sp.kernel_adjust(adj)
    v1 = adj.levels(5)
    v2 = again.levels(5)
    assert all(np.array_equal(a, b) for a, b in zip(v1, v2))
    assert again.adjusted


# ---------------------------------------------------------------------------
# observables


def test_identity_weights_on_adjusted_circle():
    adj = sp.kernel_adjust(sp.builtin("circle"))
    wp, wm = sp.identity_observable().weights(adj, 5)
    assert wp.tolist() == [0.0, 2.0, 1.0, 1.0, 1.0]
    assert wm.tolist() == [0.0, 1.0, 1.0, 1.0, 1.0]


def test_abs_weights_keep_original_operator_values():
    # the weight of |D| on a kernel vector is 0, so nothing moves at adjustment
    adj = sp.kernel_adjust(sp.builtin("circle"))
    wp, wm = sp.abs_value_observable().weights(adj, 5)
    assert wp.tolist() == [0.0, 1.0, 2.0, 3.0, 4.0]
    assert wm.tolist() == [0.0, 1.0, 2.0, 3.0, 4.0]


def test_projections_split_identity():
    adj = sp.kernel_adjust(sp.builtin("sphere_torus", 1))
    n = 12
    ip, im = sp.identity_observable().weights(adj, n)
    pp, pm = sp.plus_projection().weights(adj, n)
    qp, qm = sp.minus_projection().weights(adj, n)
    assert np.array_equal(pp + qp, ip)
    assert np.array_equal(pm + qm, im)
    assert not pm.any() and not qp.any()


def test_kernel_projection_and_rank_one():
    adj = sp.kernel_adjust(sp.builtin("circle"))
    kp, km = sp.kernel_projection().weights(adj, 4)
    assert kp.tolist() == [0.0, 1.0, 0.0, 0.0]  # kernel vector now decays at value 1
    assert km.tolist() == [0.0, 0.0, 0.0, 0.0]
    e2 = sp.rank_one(2)
    wp, wm = e2.weights(adj, 5)
    assert wp.tolist() == [0.0, 0.0, 1.0, 0.0, 0.0]
    assert e2.name == "e2"


def test_torus_monomial_weights_match_brute_shell_sums():
    adj = sp.kernel_adjust(sp.builtin("nc_torus"))
    m2 = sp.torus_monomial(2, 0)
    wp, wm = m2.weights(adj, 50)
    for k in range(1, 50):
        r = int(np.sqrt(k) + 0.5)
        shell = sum(
            m * m
            for m in range(-r - 1, r + 2)
            for n in range(-r - 1, r + 2)
            if m * m + n * n == k
        )
        assert wp[k] == shell == wm[k], k
    m2n2 = sp.torus_monomial(2, 2)
    wp, wm = m2n2.weights(adj, 30)
    assert wp[2] == 4.0  # (+-1, +-1): four points, each with m^2 n^2 = 1
    assert m2n2.degree == 4


def test_finite_diag_observable():
    adj = sp.kernel_adjust(sp.builtin("number_op"))
    d = sp.finite_diag({0: 2.0, 3: -1.0})
    wp, wm = d.weights(adj, 6)
    # the weight sitting on the kernel vector moves to value 1 with it
    assert wp.tolist() == [0.0, 2.0, 0.0, -1.0, 0.0, 0.0]
    assert d.growth_class == "rapid-decay"
    assert d.bound_constant == 3.0


def test_observable_envelope_bounds_actual_weights():
    for name, ell in [("circle", None), ("sphere_torus", 2)]:
        m = sp.builtin(name) if ell is None else sp.builtin(name, ell)
        adj = sp.kernel_adjust(m)
        for obs in (sp.identity_observable(), sp.abs_value_observable(),
                    sp.plus_projection(), sp.kernel_projection()):
            cenv, deg = obs.envelope(adj)
            v, _, _ = adj.levels(200)
            wp, wm = obs.weights(adj, 200)
            assert np.all(np.abs(wp + wm) <= cenv * (1.0 + v) ** deg + 1e-9)


# ---------------------------------------------------------------------------
# parsing and custom models


def test_get_model_parses_nested_specs():
    assert sp.get_model("circle").name == "circle"
    assert sp.get_model("sphere_torus(3)").name == "sphere_torus(3)"
    assert sp.get_model("qds(circle)").name == "qds(circle)"
    assert sp.get_model("qds(qds(circle))").name == "qds(qds(circle))"
    assert sp.get_model("amplify(number_op)").name == "amplify(number_op)"
    assert sp.get_model("kernel_adjust(circle)").adjusted


def test_get_observable_specs():
    assert sp.get_observable("identity").name == "identity"
    assert sp.get_observable("abs").degree == 1
    assert sp.get_observable("m2n2").params == {"a": 2, "b": 2}
    assert sp.get_observable("e5").name == "e5"
    with pytest.raises(UnknownObservableError):
        sp.get_observable("nonsense")


def test_model_from_json_round_trip_and_validation():
    doc = {
        "p": [3, 2],
        "C": 4.0,
        "kernel_dim": 2,
        "levels": [
            {"v": 0.0, "mp": 1, "mm": 1},
            {"v": 1.5, "mp": 2, "mm": 0},
            {"v": 2.25, "mp": 0, "mm": 3},
        ],
    }
    m = sp.model_from_json(doc)
    v, mp, mm = m.levels(3)
    assert v.tolist() == [0.0, 1.5, 2.25]
    assert float(m.p) == 1.5
    with pytest.raises(ResourceBudgetError):
        m.levels(4)
    bad = dict(doc, kernel_dim=1)
    with pytest.raises(DomainError):
        sp.model_from_json(bad)
    unordered = dict(doc, levels=list(reversed(doc["levels"])))
    with pytest.raises(DomainError):
        sp.model_from_json(unordered)


def test_levels_rejects_nonpositive_count():
    with pytest.raises(DomainError):
        sp.builtin("circle").levels(0)
