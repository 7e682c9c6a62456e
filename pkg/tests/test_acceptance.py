"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines as they complete.  Every tolerance is pinned here, not configurable.
"""
import math
import time

import numpy as np
import pytest
import sympy as sp

from trident47 import fields, mechanism, nilpotent, pmp, symmetry
from trident47.fields import ADAPTED, SQRT3, VectorFieldSym, coordinate_field, lie_bracket
from trident47.mechanism import Configuration
from trident47.nilpotent import AdaptedPoint


def _report(num, name, ok):
    print(f"[acceptance] criterion {num:2d} ({name}): {'PASS' if ok else 'FAIL'}")
    assert ok, f"criterion {num} ({name}) failed"


def _random_valid(rng):
    legs = rng.uniform(0.5, 2.0, 3)
    phi = rng.uniform(-0.3, 0.3)
    return Configuration.original(0.0, 0.0, math.pi / 2.0, phi, *legs)


def test_criterion_01_bracket_table():
    start = time.perf_counter()
    x, l1, l2, l3, y1, y2, y3 = fields.coords(ADAPTED)
    n1 = VectorFieldSym(ADAPTED, (1, 0, 0, 0,
                                  -(-SQRT3 / 2 * x + l1 - 1),
                                  -(l2 - 1),
                                  -(SQRT3 / 2 * x + l3 - 1)))
    gens = [n1] + [coordinate_field(ADAPTED, i) for i in (1, 2, 3)]
    expected = {(0, 1): 4, (0, 2): 5, (0, 3): 6}

    ok = True
    inner = {}
    for i in range(4):
        for j in range(4):
            b = lie_bracket(gens[i], gens[j])
            inner[(i, j)] = b
            key = (i, j) if i < j else (j, i)
            if i == j:
                ok &= b.is_zero()
            elif key in expected:
                want = coordinate_field(ADAPTED, expected[key])
                if (i, j) != key:
                    want = -want
                ok &= all((sp.expand(a - w) == 0)
                          for a, w in zip(b.components, want.components))
            else:
                ok &= b.is_zero()
    # step-2 nilpotency: every triple bracket vanishes structurally
    for i in range(4):
        for j in range(4):
            for k in range(4):
                ok &= lie_bracket(gens[k], inner[(i, j)]).is_zero()
    elapsed = time.perf_counter() - start
    ok &= elapsed < 1.0
    _report(1, f"bracket table, {elapsed:.2f}s", ok)


def test_criterion_02_controllability():
    start = time.perf_counter()
    rng = np.random.default_rng(42)
    res = mechanism.controllability(mechanism.reference_configuration(), rank_tol=1e-9)
    ok = res.growth == (4, 7) and res.det != 0.0
    for _ in range(1000):
        r = mechanism.controllability(_random_valid(rng), rank_tol=1e-9)
        ok &= r.growth == (4, 7) and r.det != 0.0
    elapsed = time.perf_counter() - start
    ok &= elapsed < 10.0
    _report(2, f"growth vector (4,7) x1001, {elapsed:.2f}s", ok)


def test_criterion_03_dynamic_pair():
    q0 = mechanism.reference_configuration()
    ok = True
    for f in (1.0, 2.0, -0.5):
        r = mechanism.check_dynamic_pair(q0, f)
        ok &= (r.rank_v0, r.rank_v1, r.transversal) == (3, 6, True)
    _report(3, "dynamic-pair regularity", ok)


def test_criterion_04_pfaffian_signature():
    rng = np.random.default_rng(7)
    ok = mechanism.pfaffian_signature(
        mechanism.reference_configuration(), eig_tol=1e-9).as_tuple() == (0, 0)
    for _ in range(1000):
        sig = mechanism.pfaffian_signature(_random_valid(rng), eig_tol=1e-9)
        ok &= sig.as_tuple() == (0, 0)
    _report(4, "Pfaffian signature (0,0)", ok)


def test_criterion_05_coordinate_transforms():
    rng = np.random.default_rng(11)
    p0 = nilpotent.to_adapted(mechanism.reference_configuration())
    target = np.array([0.0, 1.0, 1.0, 1.0, -4.0 * math.pi, 4.0 * math.pi / 5.0,
                       -4.0 * math.pi])
    ok = np.abs(p0.array - target).max() < 1e-12
    for _ in range(100):
        q = Configuration("original", tuple(rng.uniform(-2.0, 2.0, 7)))
        back = nilpotent.from_adapted(nilpotent.to_adapted(q))
        ok &= np.abs(back.array - q.array).max() < 1e-12
    _report(5, "adapted-chart transforms", ok)


def test_criterion_06_group_axioms_and_left_invariance():
    rng = np.random.default_rng(13)
    ok = True
    e = nilpotent.group_identity()
    for _ in range(1000):
        p, q, r = (AdaptedPoint.from_array(rng.uniform(-3.0, 3.0, 7)) for _ in range(3))
        ok &= np.abs(nilpotent.group_mul(p, e).array - p.array).max() < 1e-12
        ok &= np.abs(nilpotent.group_mul(e, p).array - p.array).max() < 1e-12
        inv = nilpotent.group_inverse(p)
        ok &= np.abs(nilpotent.group_mul(p, inv).array).max() < 1e-12
        ok &= np.abs(nilpotent.group_mul(inv, p).array).max() < 1e-12
        left = nilpotent.group_mul(nilpotent.group_mul(p, q), r).array
        right = nilpotent.group_mul(p, nilpotent.group_mul(q, r)).array
        ok &= np.abs(left - right).max() < 1e-12
    for f in nilpotent.extended_frame():
        rep = nilpotent.check_left_invariance(f, samples=1000, seed=17, tol=1e-9)
        ok &= rep.field_ok
    _report(6, "group axioms + left invariance", ok)


def test_criterion_07_symmetries():
    ok = symmetry.so3_structure() == {
        (1, 2): (0.0, 0.0, -1.0),
        (1, 3): (0.0, 1.0, 0.0),
        (2, 3): (-1.0, 0.0, 0.0),
    }
    for v in symmetry.v_fields():
        rep = symmetry.check_symmetry_conditions(v)
        ok &= rep.commutes_with_n1 and rep.matrix_antisymmetric and rep.metric_preserved
    rng = np.random.default_rng(19)
    for _ in range(25):
        a = rng.uniform(-2.0, 2.0, 3)
        if np.linalg.norm(a) < 0.2:
            continue
        pt = symmetry.fixed_point_set(tuple(a), x=rng.uniform(-1.5, 1.5),
                                      k=rng.uniform(-2.0, 2.0))
        val = symmetry.so3_combination(*a).field(pt.array)
        ok &= np.abs(val).max() < 1e-12
    _report(7, "so(3) symmetry relations", ok)


def test_criterion_08_pmp_conservation():
    rng = np.random.default_rng(23)
    h0s = np.empty((50, 7))
    for i in range(50):
        u = rng.normal(size=4)
        h0s[i, :4] = u / np.linalg.norm(u)
        h0s[i, 4:] = rng.uniform(-1.5, 1.5, 3)
    T = 2.0 * math.pi
    times, states, momenta = pmp.integrate_extremal_batch(h0s, np.zeros((50, 7)), T, 1e-3)
    H = 0.5 * np.sum(momenta[:, :, :4] ** 2, axis=2)
    drift_rate = np.abs(H - H[:, :1]).max(axis=1) / T
    casimir = np.abs(momenta[:, :, 4:] - momenta[:, :1, 4:]).max()
    ok = bool(drift_rate.max() < 1e-8) and casimir == 0.0
    _report(8, f"H conservation (worst drift {drift_rate.max():.1e}/t)", ok)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_criterion_09_examples(n):
    start = time.perf_counter()
    h0 = pmp.example_momenta(n)
    ok = abs(h0.horizontal_norm() - 1.0) < 1e-14  # exact hand sums
    traj = pmp.integrate_extremal(h0, nilpotent.group_identity(),
                                  T=2.0 * math.pi, dt=1e-3).to_original()
    worst = 0.0
    for i, t in enumerate(traj.times):
        ref = pmp.example_solution(n, float(t))
        worst = max(worst, float(np.abs(ref.array - traj.states[i]).max()))
    ok &= worst < 1e-6
    elapsed = time.perf_counter() - start
    ok &= elapsed < 5.0
    _report(9, f"example {n} reproduction (sup {worst:.1e}, {elapsed:.2f}s)", ok)


def test_criterion_10_bracket_motion():
    params = pmp.BracketMotionParams(amplitude=0.4, omega=2.0 * math.pi / 50.0, partner=2)
    d = pmp.bracket_displacement(pmp.bracket_motion(params, "nilpotent"))
    returns = np.abs(d[[0, 1, 2, 3, 5, 6]]).max()
    area = math.pi * 0.4 ** 2
    ok = returns < 1e-9 and abs(d[4] - area) < 1e-6

    amps = (0.4, 0.2, 0.1, 0.05)
    diffs = []
    for A in amps:
        p = pmp.BracketMotionParams(amplitude=A)
        dn = pmp.bracket_displacement(pmp.bracket_motion(p, "nilpotent"))
        do = pmp.bracket_displacement(pmp.bracket_motion(p, "original"))
        diffs.append(float(np.linalg.norm(dn - do)))
    orders = [math.log(diffs[i] / diffs[i + 1]) / math.log(amps[i] / amps[i + 1])
              for i in range(3)]
    ok &= min(orders) >= 2.0
    _report(10, f"bracket gait (dy1 err {abs(d[4]-area):.1e}, orders "
                f"{[f'{o:.2f}' for o in orders]})", ok)
