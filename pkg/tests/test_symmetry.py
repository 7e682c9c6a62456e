import math

import numpy as np
import pytest

from trident47 import nilpotent, pmp
from trident47.errors import NotASymmetry, ZeroCombination
from trident47.fields import ADAPTED, coordinate_field, coords, lie_bracket
from trident47.nilpotent import AdaptedPoint
from trident47.symmetry import (SymmetryField, check_symmetry_conditions,
                                fixed_point_set, flow_invariance_report,
                                so3_combination, so3_structure, symmetry_flow,
                                transitivity_rank, v_fields, w_fields,
                                w_structure_report)


# ---------------------------------------------------------------------------
# so(3) structure


def test_so3_bracket_table():
    table = so3_structure()
    assert table[(1, 2)] == (0.0, 0.0, -1.0)   # [v1,v2] = -v3
    assert table[(1, 3)] == (0.0, 1.0, 0.0)    # [v1,v3] = v2
    assert table[(2, 3)] == (-1.0, 0.0, 0.0)   # [v2,v3] = -v1


def test_bracket_with_self_is_zero():
    v1 = v_fields()[0].field
    assert lie_bracket(v1, v1).is_zero()


def test_v_fields_vanish_at_origin():
    for v in v_fields():
        assert np.array_equal(v.field(np.zeros(7)), np.zeros(7))


# ---------------------------------------------------------------------------
# symmetry conditions


# regression-pinned induced rotations on the vertical frame (N2, N3, N4)
_EXPECTED_A = {
    "v1": ((0.0, 0.0, 0.0), (0.0, 0.0, -1.0), (0.0, 1.0, 0.0)),
    "v2": ((0.0, 0.0, 1.0), (0.0, 0.0, 0.0), (-1.0, 0.0, 0.0)),
    "v3": ((0.0, -1.0, 0.0), (1.0, 0.0, 0.0), (0.0, 0.0, 0.0)),
}


def test_symmetry_conditions_for_generators():
    for v in v_fields():
        rep = check_symmetry_conditions(v)
        assert rep.commutes_with_n1
        assert rep.vertical_matrix == _EXPECTED_A[v.name]
        assert rep.matrix_antisymmetric
        assert rep.metric_preserved


def test_symmetry_conditions_for_combination():
    v = so3_combination(0.5, -1.0, 2.0)
    rep = check_symmetry_conditions(v)
    A = np.array(rep.vertical_matrix)
    assert np.abs(A + A.T).max() == 0.0
    want = (0.5 * np.array(_EXPECTED_A["v1"]) - np.array(_EXPECTED_A["v2"])
            + 2.0 * np.array(_EXPECTED_A["v3"]))
    assert np.allclose(A, want)


def test_non_symmetry_is_rejected():
    x = coords(ADAPTED)[0]
    bad = SymmetryField("x*dl1", x * coordinate_field(ADAPTED, 1))
    with pytest.raises(NotASymmetry) as err:
        check_symmetry_conditions(bad)
    assert err.value.residual is not None
    assert not err.value.residual.is_zero()


# ---------------------------------------------------------------------------
# fixed points


def test_central_curve_is_fixed_for_every_combination(rng):
    for _ in range(10):
        a = rng.uniform(-2.0, 2.0, 3)
        if np.linalg.norm(a) < 0.1:
            continue
        x = rng.uniform(-2.0, 2.0)
        pt = fixed_point_set(tuple(a), x=x, k=0.0)
        bump = math.sqrt(3.0) / 4.0 * x * x
        assert np.allclose(pt.array, (x, 0, 0, 0, x + bump, x, x - bump), atol=1e-15)
        val = so3_combination(*a).field(pt.array)
        assert np.abs(val).max() < 1e-12


def test_fixed_point_example_for_v1():
    pt = fixed_point_set((1.0, 0.0, 0.0), x=0.0, k=1.0)
    assert np.array_equal(pt.array, np.array([0, 1, 0, 0, 1, 0, 0]))
    assert np.abs(v_fields()[0].field(pt.array)).max() == 0.0


def test_fixed_point_residuals_along_axis(rng):
    for _ in range(10):
        a = rng.uniform(-1.5, 1.5, 3)
        if np.linalg.norm(a) < 0.1:
            continue
        pt = fixed_point_set(tuple(a), x=rng.uniform(-1, 1), k=rng.uniform(-2, 2))
        val = so3_combination(*a).field(pt.array)
        assert np.abs(val).max() < 1e-12


def test_zero_combination_rejected():
    with pytest.raises(ZeroCombination):
        fixed_point_set((0.0, 0.0, 0.0), x=1.0, k=1.0)


# ---------------------------------------------------------------------------
# flows


def test_flow_fixes_fixed_points():
    v = so3_combination(1.0, 1.0, 1.0)
    pt = fixed_point_set((1.0, 1.0, 1.0), x=0.5, k=1.0)
    out = symmetry_flow(v, pt, t=2.0, dt=1e-2)
    assert np.abs(out.array - pt.array).max() < 1e-9 * 2.0


def test_flow_zero_time_is_identity():
    v = v_fields()[1]
    p = AdaptedPoint(0.3, 1.0, 0.5, -0.2, 0.1, 0.2, 0.3)
    # n = max(1, ceil(0)) takes a single step of size zero
    out = symmetry_flow(v, p, t=0.0, dt=1e-3)
    assert np.array_equal(out.array, p.array)


def test_flow_reversibility():
    v = v_fields()[0]
    p = AdaptedPoint(0.4, 1.2, -0.3, 0.8, 0.05, -0.4, 0.6)
    there = symmetry_flow(v, p, t=1.5, dt=1e-3)
    back = symmetry_flow(v, there, t=-1.5, dt=1e-3)
    assert np.abs(back.array - p.array).max() < 1e-8


# ---------------------------------------------------------------------------
# w-family


def test_w_algebra_closure():
    rep = w_structure_report()
    assert rep["others_vanish"]
    assert rep["nontrivial"][("w1", "w2")] == (1.0, 0.0, 0.0)
    assert rep["nontrivial"][("w1", "w3")] == (0.0, 1.0, 0.0)
    assert rep["nontrivial"][("w1", "w4")] == (0.0, 0.0, 1.0)


def test_w_orbit_is_full():
    assert transitivity_rank(samples=30) == 7


def test_w12_is_vertical_coordinate_field():
    w = w_fields()
    assert np.array_equal(w["w12"].field(np.zeros(7)), np.eye(7)[4])


# ---------------------------------------------------------------------------
# invariance of horizontal curves


def test_flow_preserves_horizontality_and_length():
    c = pmp.example_constants(3)
    traj = pmp.integrate_extremal(c.initial_fibre_state(), nilpotent.group_identity(),
                                  T=2.0, dt=2e-3)
    states = traj.states[::20]
    times = traj.times[::20]
    tangents = np.stack([pmp.base_rhs(q, h) for q, h in zip(states, traj.momenta[::20])])
    v = so3_combination(0.6, -0.8, 0.4)
    rep = flow_invariance_report(v, states, times, tangents, s=0.7, dt=1e-2)
    assert rep.horizontality_residual < 1e-6
    assert rep.relative_length_change < 1e-6
