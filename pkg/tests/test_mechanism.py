import math

import numpy as np
import pytest
import sympy as sp

from trident47 import mechanism
from trident47.errors import ChartMismatch, SingularConfiguration
from trident47.fields import ORIGINAL, SQRT3, VectorFieldSym, coords, fields_equal
from trident47.mechanism import (Configuration, check_dynamic_pair, controllability,
                                 horizontal_frame, horizontal_frame_slice, pfaff_matrix,
                                 pfaffian_signature, serialize_matrix, matrix_from_json,
                                 slice_bracket_fields, wheel_positions)

S3 = math.sqrt(3.0)


def random_valid(rng, on_slice=True):
    legs = rng.uniform(0.5, 2.0, 3)
    phi = rng.uniform(-0.3, 0.3)
    if on_slice:
        return Configuration.original(0.0, 0.0, math.pi / 2.0, phi, *legs)
    x, y = rng.uniform(-5.0, 5.0, 2)
    theta = rng.uniform(0.0, 2.0 * math.pi)
    return Configuration.original(x, y, theta, phi, *legs)


# ---------------------------------------------------------------------------
# kinematics


def test_wheel_positions_at_q0(q0):
    w = wheel_positions(q0)
    assert np.allclose(w[1], (0.0, 2.0), atol=1e-15)         # second wheel straight up
    assert np.allclose(w[0], (S3, -1.0), atol=1e-14)          # first anchor at -2pi/3
    assert np.allclose(w[2], (-S3, -1.0), atol=1e-14)


def test_wheel_positions_periodic_in_theta(rng):
    q = random_valid(rng, on_slice=False)
    vals = list(q.values)
    vals[2] += 2.0 * math.pi
    shifted = Configuration(ORIGINAL, tuple(vals))
    assert np.allclose(wheel_positions(q), wheel_positions(shifted), atol=1e-12)


def test_wheel_positions_rejects_adapted_chart():
    with pytest.raises(ChartMismatch):
        wheel_positions(Configuration.adapted(0, 1, 1, 1, 0, 0, 0))


def test_pfaff_rows_at_q0(q0):
    m = pfaff_matrix(q0)
    assert np.allclose(m[0], (0.5, S3 / 2.0, 2.0, 0.0, 0.0, 0.0, 0.0), atol=1e-15)
    # wheel-2 row from the velocity equations: d-theta coefficient cos(phi)+l2,
    # d-phi coefficient l2 (the frame below is annihilated by it)
    assert np.allclose(m[1], (-1.0, 0.0, 2.0, 1.0, 0.0, 0.0, 0.0), atol=1e-15)
    assert np.allclose(m[2], (0.5, -S3 / 2.0, 2.0, 0.0, 0.0, 0.0, 0.0), atol=1e-15)


def test_leg_columns_vanish(rng):
    for _ in range(10):
        q = random_valid(rng, on_slice=False)
        assert np.all(pfaff_matrix(q)[:, 4:] == 0.0)


# ---------------------------------------------------------------------------
# frame


def test_frame_annihilated_by_constraints(rng):
    for on_slice in (True, False):
        for _ in range(25):
            q = random_valid(rng, on_slice)
            m = pfaff_matrix(q)
            f = horizontal_frame(q)
            assert np.abs(m @ f.T).max() < 1e-10


def test_frame_at_q0(q0):
    f = horizontal_frame(q0)
    assert np.allclose(f[0], (1.0, 0.0, -0.25, 1.5, 0.0, 0.0, 0.0), atol=1e-12)
    assert np.array_equal(f[1:], np.eye(7)[4:])


def test_frame_y_component_vanishes_for_symmetric_legs():
    q = Configuration.original(0.0, 0.0, math.pi / 2.0, 0.0, 2.0, 1.0, 2.0)
    f = horizontal_frame(q)
    assert abs(f[0, 1]) < 1e-12  # (l1 - l3) sqrt(3) / (3 L) = 0


def test_numeric_frame_matches_slice_closed_form(rng):
    x1 = horizontal_frame_slice()[0]
    for _ in range(20):
        q = random_valid(rng, on_slice=True)
        assert np.allclose(horizontal_frame(q)[0], x1(q.values), atol=1e-10)


def test_singular_configurations_raise():
    with pytest.raises(SingularConfiguration):
        horizontal_frame(Configuration.original(0, 0, math.pi / 2, 0, 1, 1e-12, 1))
    with pytest.raises(SingularConfiguration):
        horizontal_frame(Configuration.original(0, 0, math.pi / 2, 0, -3, 1, 1))  # L = 0


# ---------------------------------------------------------------------------
# brackets: the printed closed forms are the oracle for the symbolic path,
# and the symbolic path is the oracle for the finite-difference path


def _printed_bracket_fields():
    x, y, th, ph, l1, l2, l3 = coords(ORIGINAL)
    L = l1 + l3 + 2
    x12 = VectorFieldSym(ORIGINAL, (
        0,
        -2 * (l3 + 1) / (SQRT3 * L**2),
        -1 / L**2,
        (-2 * sp.sin(ph) * (l3 + 1) + SQRT3 * sp.cos(ph) + SQRT3 * l2) / (SQRT3 * l2 * L**2),
        0, 0, 0))
    x13 = VectorFieldSym(ORIGINAL, (
        0, 0, 0,
        (sp.sin(ph) * (l1 - l3) + SQRT3 * sp.cos(ph) * (L + 1)) / (SQRT3 * l2**2 * L),
        0, 0, 0))
    x14 = VectorFieldSym(ORIGINAL, (
        0,
        (2 * l1 + 2) / (SQRT3 * L**2),
        -1 / L**2,
        (2 * sp.sin(ph) * (l1 + 1) + SQRT3 * sp.cos(ph) + SQRT3 * l2) / (SQRT3 * l2 * L**2),
        0, 0, 0))
    return x12, x13, x14


def test_symbolic_brackets_match_printed_closed_forms(q0):
    for got, want in zip(slice_bracket_fields(), _printed_bracket_fields()):
        assert fields_equal(got, want)
        assert np.abs(got(q0.values) - want(q0.values)).max() < 1e-9


def test_x12_at_q0(q0):
    x12 = slice_bracket_fields()[0]
    val = x12(q0.values)
    assert np.allclose(val, (0.0, -1.0 / (4.0 * S3), -1.0 / 16.0, 1.0 / 8.0, 0, 0, 0),
                       atol=1e-15)


def test_fd_brackets_match_symbolic_on_slice(rng):
    for _ in range(10):
        q = random_valid(rng, on_slice=True)
        fd = mechanism._frame_brackets(q.array, "fd")
        symb = mechanism._frame_brackets(q.array, "symbolic")
        assert np.abs(fd - symb).max() < 1e-6


# ---------------------------------------------------------------------------
# controllability


def test_controllability_at_q0(q0):
    res = controllability(q0)
    assert res.growth == (4, 7)
    assert res.det != 0.0
    assert res.det_nonzero


def test_controllability_random_sweep(rng):
    for _ in range(100):
        q = random_valid(rng, on_slice=True)
        assert controllability(q).growth == (4, 7)


def test_controllability_euclidean_invariance(rng):
    # regularity depends on the shape only, not the planar pose
    for _ in range(50):
        q = random_valid(rng, on_slice=False)
        res = controllability(q)
        assert res.growth == (4, 7)
        assert abs(res.det) > 1e-12


def test_gauged_frame_rotates_with_heading(rng):
    # the X1 gauge is Euclidean-equivariant: rotating the pose rotates the
    # planar part of X1 and keeps the shape part
    for _ in range(10):
        q = random_valid(rng, on_slice=True)
        base = horizontal_frame(q)[0]
        delta = rng.uniform(-2.0, 2.0)
        vals = list(q.values)
        vals[0], vals[1] = rng.uniform(-3.0, 3.0, 2)
        vals[2] += delta
        rotated = horizontal_frame(Configuration(ORIGINAL, tuple(vals)))[0]
        c, s = math.cos(delta), math.sin(delta)
        assert np.allclose(rotated[0], c * base[0] - s * base[1], atol=1e-9)
        assert np.allclose(rotated[1], s * base[0] + c * base[1], atol=1e-9)
        assert np.allclose(rotated[2:], base[2:], atol=1e-9)


# ---------------------------------------------------------------------------
# dynamic pairs


@pytest.mark.parametrize("f", [1.0, 2.0, -0.5])
def test_dynamic_pair_regular_at_q0(q0, f):
    res = check_dynamic_pair(q0, f)
    assert (res.rank_v0, res.rank_v1, res.transversal) == (3, 6, True)


def test_dynamic_pair_rejects_zero_f(q0):
    with pytest.raises(ValueError):
        check_dynamic_pair(q0, 0.0)


def test_dynamic_pair_span_invariance(q0):
    # scaling the input fields cannot change the ranks; exercised through
    # different drift scalings which rescale the bracket directions
    for f in (0.3, 5.0):
        res = check_dynamic_pair(q0, f)
        assert (res.rank_v0, res.rank_v1, res.transversal) == (3, 6, True)
    # scaling X2..X4 by nonzero constants does not change span ranks either
    frame = horizontal_frame(q0)
    scaled = np.diag([2.0, -0.7, 11.0]) @ frame[1:4]
    assert mechanism._rank(scaled, 1e-9) == mechanism._rank(frame[1:4], 1e-9) == 3


# ---------------------------------------------------------------------------
# Pfaffian signature


def test_signature_at_q0(q0):
    sig = pfaffian_signature(q0)
    assert sig.as_tuple() == (0, 0)


def test_signature_across_sweep(rng):
    for on_slice in (True, False):
        for _ in range(20):
            q = random_valid(rng, on_slice)
            assert pfaffian_signature(q).as_tuple() == (0, 0)


def test_signature_is_unordered():
    a = mechanism.SignatureResult(p=1, r=2, eig_tol=1e-9)
    b = mechanism.SignatureResult(p=2, r=1, eig_tol=1e-9)
    assert a.as_tuple() == b.as_tuple() == (2, 1)


def test_signature_zero_from_bracket_table_oracle(rng):
    # independent derivation on the nilpotent model: the only nonzero
    # brackets pair the first frame field with the others, so every matrix
    # A_k has nonzero entries in its first row/column only and the 4x4
    # Pfaffian a01*a23 - a02*a13 + a03*a12 vanishes identically.
    from trident47.nilpotent import nilpotent_frame_matrix
    for _ in range(20):
        p = rng.uniform(-2.0, 2.0, 7)
        F = nilpotent_frame_matrix(p)
        mus = []
        for yslot in (4, 5, 6):
            mu = np.zeros(7)
            mu[yslot] = 1.0
            mu[0] = -F[0, yslot]  # annihilate N1 as well as the leg fields
            mus.append(mu)
        table = {(0, i): np.eye(7)[3 + i] for i in (1, 2, 3)}  # [N1,Ni] = e_{y...}
        for k in range(3):
            A = np.zeros((4, 4))
            for (i, j), b in table.items():
                A[i, j] = -mus[k] @ b
                A[j, i] = -A[i, j]
            assert mechanism._pfaffian4(A) == pytest.approx(0.0, abs=1e-15)
        for c in rng.uniform(-1, 1, (5, 3)):
            Ac = np.zeros((4, 4))
            for k in range(3):
                for (i, j), b in table.items():
                    val = -c[k] * (mus[k] @ b)
                    Ac[i, j] += val
                    Ac[j, i] -= val
            assert mechanism._pfaffian4(Ac) == pytest.approx(0.0, abs=1e-12)


def _pfaffian_stack(bracket_coeffs):
    """Build the (3,4,4) stack from {(i,j): (c1,c2,c3)} bracket coefficients."""
    A = np.zeros((3, 4, 4))
    for (i, j), cs in bracket_coeffs.items():
        for k, c in enumerate(cs):
            A[k, i, j] += -c
            A[k, j, i] -= -c
    return A


def test_signature_machinery_detects_nondegenerate_structures():
    # quaternionic-type bracket relations give the definite signature (3,0)
    quaternionic = {
        (0, 1): (1, 0, 0), (2, 3): (1, 0, 0),
        (0, 2): (0, 1, 0), (3, 1): (0, 1, 0),
        (0, 3): (0, 0, 1), (1, 2): (0, 0, 1),
    }
    sig = mechanism._signature_of_pfaffian_form(_pfaffian_stack(quaternionic), 1e-9)
    assert sig.as_tuple() == (3, 0)
    # flipping one pairing produces the split form (2,1)
    split = dict(quaternionic)
    split[(3, 1)] = (0, -1, 0)
    sig = mechanism._signature_of_pfaffian_form(_pfaffian_stack(split), 1e-9)
    assert sig.as_tuple() == (2, 1)


def test_degenerate_inputs_raise(q0):
    with pytest.raises(SingularConfiguration):
        pfaffian_signature(Configuration.original(0, 0, math.pi / 2, 0, 1, 1e-12, 1))


# ---------------------------------------------------------------------------
# serialization


def test_matrix_serialization_roundtrip(q0):
    g = controllability(q0).gbar
    obj = serialize_matrix(g)
    assert obj["shape"] == [7, 7]
    assert len(obj["data"]) == 49
    assert np.array_equal(matrix_from_json(obj), g)
