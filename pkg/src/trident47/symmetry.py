"""Infinitesimal symmetries of the nilpotent structure.

Two explicit families in the adapted chart:

* w1..w4 and w12, w13, w14: a transitive nilpotent algebra whose flows act
  by left translations (it mirrors the frame algebra's structure constants);
* v1, v2, v3: the isotropy so(3) algebra fixing the origin.  Each v_i acts
  as a simultaneous rotation of the leg block (l1,l2,l3) and the (y1,y2,y3)
  block, commutes with N1, and rotates (N2,N3,N4) orthogonally, so the
  control metric is preserved.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
import sympy as sp

from . import fields
from .errors import NotASymmetry, ZeroCombination
from .fields import (ADAPTED, SQRT3, VectorFieldSym, coordinate_field, coords,
                     is_zero_expr, lie_bracket)
from .nilpotent import AdaptedPoint, nilpotent_frame, nilpotent_frame_matrix

_S3 = math.sqrt(3.0)


@dataclass(frozen=True)
class SymmetryField:
    """A named symbolic field in the adapted chart."""

    name: str
    field: VectorFieldSym


@functools.lru_cache(maxsize=1)
def v_fields() -> tuple[SymmetryField, SymmetryField, SymmetryField]:
    """The isotropy generators v1, v2, v3 (they vanish at the origin)."""
    x, l1, l2, l3, y1, y2, y3 = coords(ADAPTED)
    P = SQRT3 * x**2 / 4 - x + y3
    Q = x - y2
    R = SQRT3 * x**2 / 4 + x - y1
    v1 = VectorFieldSym(ADAPTED, (0, 0, -l3, l2, 0, -P, -Q))
    v2 = VectorFieldSym(ADAPTED, (0, l3, 0, -l1, P, 0, R))
    v3 = VectorFieldSym(ADAPTED, (0, -l2, l1, 0, Q, -R, 0))
    return (SymmetryField("v1", v1), SymmetryField("v2", v2), SymmetryField("v3", v3))


@functools.lru_cache(maxsize=1)
def w_fields() -> dict[str, SymmetryField]:
    """The transitive nilpotent algebra w1..w4, w12, w13, w14."""
    x, l1, l2, l3, y1, y2, y3 = coords(ADAPTED)
    w = {
        "w1": VectorFieldSym(ADAPTED, (-1, -SQRT3 / 2, 0, 0, 0, 0, SQRT3 * x / 2)),
        "w2": VectorFieldSym(ADAPTED, (0, 1, 0, 0, -x, 0, 0)),
        "w3": VectorFieldSym(ADAPTED, (0, 0, 1, 0, 0, -x, 0)),
        "w4": VectorFieldSym(ADAPTED, (0, 0, 0, 1, 0, 0, -x)),
        "w12": coordinate_field(ADAPTED, 4),
        "w13": coordinate_field(ADAPTED, 5),
        "w14": coordinate_field(ADAPTED, 6),
    }
    return {name: SymmetryField(name, f) for name, f in w.items()}


def so3_combination(a1: float, a2: float, a3: float) -> SymmetryField:
    """The combination a1*v1 + a2*v2 + a3*v3."""
    v1, v2, v3 = v_fields()
    f = sp.nsimplify(a1) * v1.field + sp.nsimplify(a2) * v2.field + sp.nsimplify(a3) * v3.field
    return SymmetryField(f"{a1}*v1+{a2}*v2+{a3}*v3", f)


def _coefficients_in_basis(b: VectorFieldSym, basis: list[VectorFieldSym],
                           seed: int = 0) -> tuple[float, ...]:
    """Constant coefficients of b in a pointwise-independent field basis,
    fit numerically and then verified exactly."""
    rng = np.random.default_rng(seed)
    pts = fields.random_points(ADAPTED, 4, rng) * 1.5
    rows, rhs = [], []
    for p in pts:
        cols = np.stack([f(p) for f in basis], axis=1)  # 7 x n
        rows.append(cols)
        rhs.append(b(p))
    Amat = np.vstack(rows)
    bvec = np.concatenate(rhs)
    sol, *_ = np.linalg.lstsq(Amat, bvec, rcond=None)
    rounded = [sp.nsimplify(round(c * 12) / 12, rational=True) for c in sol]
    residual = b - _linear_combo(basis, rounded)
    if not residual.is_zero():
        raise NotASymmetry("field is not a constant combination of the basis",
                           residual=residual)
    return tuple(float(c) for c in rounded)


def _linear_combo(basis, coeffs) -> VectorFieldSym:
    out = coeffs[0] * basis[0]
    for c, f in zip(coeffs[1:], basis[1:]):
        out = out + c * f
    return out


def so3_structure() -> dict[tuple[int, int], tuple[float, float, float]]:
    """Structure constants of (v1, v2, v3): [v_i, v_j] = sum_k c_k v_k.

    Coefficients are fit numerically and verified by exact symbolic
    cancellation, so the returned table is certified.
    """
    vs = [v.field for v in v_fields()]
    table = {}
    for i, j in ((1, 2), (1, 3), (2, 3)):
        b = lie_bracket(vs[i - 1], vs[j - 1])
        table[(i, j)] = _coefficients_in_basis(b, vs)
    return table


@dataclass(frozen=True)
class SymmetryReport:
    name: str
    commutes_with_n1: bool
    vertical_matrix: tuple[tuple[float, ...], ...]  # A with [v,N_j] = sum_k A_jk N_k
    matrix_antisymmetric: bool
    metric_preserved: bool


def check_symmetry_conditions(v: SymmetryField) -> SymmetryReport:
    """Verify the defining conditions of an isotropy symmetry, symbolically.

    Requires [v, N1] = 0 and [v, N_j] = sum_k A_jk N_k for j, k in {2,3,4}
    with constant antisymmetric A.  Together these say the field fixes the
    line of N1 and rotates the orthonormal complement, i.e. it preserves
    the control metric.  Raises NotASymmetry with the offending residual
    field when a condition fails.
    """
    n1, n2, n3, n4 = nilpotent_frame()
    b1 = lie_bracket(v.field, n1)
    if not b1.is_zero():
        raise NotASymmetry(f"[{v.name}, N1] != 0", residual=b1)

    legs = [n2, n3, n4]
    A = []
    for j, nj in enumerate(legs, start=2):
        bj = lie_bracket(v.field, nj)
        # must be vertical with constant coefficients
        for idx in (0, 4, 5, 6):
            if not is_zero_expr(bj.components[idx]):
                raise NotASymmetry(f"[{v.name}, N{j}] leaves the vertical bundle",
                                   residual=bj)
        row = []
        for k in (1, 2, 3):
            c = sp.simplify(bj.components[k])
            if c.free_symbols:
                raise NotASymmetry(f"[{v.name}, N{j}] has non-constant coefficients",
                                   residual=bj)
            row.append(float(c))
        A.append(tuple(row))

    mat = np.array(A)
    antisym = bool(np.max(np.abs(mat + mat.T)) == 0.0)
    if not antisym:
        raise NotASymmetry(f"induced matrix of {v.name} on the vertical frame "
                           f"is not antisymmetric", residual=None)
    return SymmetryReport(
        name=v.name,
        commutes_with_n1=True,
        vertical_matrix=tuple(tuple(r) for r in A),
        matrix_antisymmetric=antisym,
        metric_preserved=antisym,
    )


def fixed_point_set(a: tuple[float, float, float], x: float, k: float) -> AdaptedPoint:
    """A point of the fixed-point set of a1*v1 + a2*v2 + a3*v3.

    The set is the curve of double-rotation centres shifted along the
    rotation axis: legs proportional to a, y-block offset by the centre
    curve (x + sqrt(3)x^2/4, x, x - sqrt(3)x^2/4).
    """
    a1, a2, a3 = (float(v) for v in a)
    if a1 == 0.0 and a2 == 0.0 and a3 == 0.0:
        raise ZeroCombination("(a1, a2, a3) must be nonzero")
    bump = _S3 / 4.0 * x * x
    return AdaptedPoint(
        x=x,
        l1=k * a1, l2=k * a2, l3=k * a3,
        y1=x + bump + k * a1,
        y2=x + k * a2,
        y3=x - bump + k * a3,
    )


def symmetry_flow(v: SymmetryField, p: AdaptedPoint, t: float, dt: float = 1e-3) -> AdaptedPoint:
    """Flow p for time t along v with fixed-step RK4."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    n = max(1, int(math.ceil(abs(t) / dt)))
    h = t / n
    f = v.field
    y = p.array
    for _ in range(n):
        k1 = f(y)
        k2 = f(y + 0.5 * h * k1)
        k3 = f(y + 0.5 * h * k2)
        k4 = f(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return AdaptedPoint.from_array(y)


@functools.lru_cache(maxsize=64)
def _field_jacobian_fn(field: VectorFieldSym):
    cs = coords(ADAPTED)
    jac = sp.Matrix([[sp.diff(c, s) for s in cs] for c in field.components])
    fn = sp.lambdify(cs, jac, modules="numpy")
    return lambda arr: np.asarray(fn(*arr), dtype=float)


def flow_with_jacobian(v: SymmetryField, p: AdaptedPoint, t: float,
                       dt: float = 1e-3) -> tuple[AdaptedPoint, np.ndarray]:
    """Flow a point and the differential of the flow map (variational RK4)."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    n = max(1, int(math.ceil(abs(t) / dt)))
    h = t / n
    f = v.field
    Df = _field_jacobian_fn(f)

    def rhs(state):
        y, J = state
        return f(y), Df(y) @ J

    y, J = p.array, np.eye(7)
    for _ in range(n):
        k1y, k1j = rhs((y, J))
        k2y, k2j = rhs((y + 0.5 * h * k1y, J + 0.5 * h * k1j))
        k3y, k3j = rhs((y + 0.5 * h * k2y, J + 0.5 * h * k2j))
        k4y, k4j = rhs((y + h * k3y, J + h * k3j))
        y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        J = J + (h / 6.0) * (k1j + 2.0 * k2j + 2.0 * k3j + k4j)
    return AdaptedPoint.from_array(y), J


def w_structure_report() -> dict:
    """Bracket structure of the w-family, certified symbolically.

    [w1, w_j] for j = 2,3,4 land in span(w12, w13, w14) with constant
    coefficients; every other pair commutes.
    """
    w = w_fields()
    gens = ["w1", "w2", "w3", "w4"]
    centre = [w["w12"].field, w["w13"].field, w["w14"].field]
    nontrivial = {}
    for j in (2, 3, 4):
        b = lie_bracket(w["w1"].field, w[f"w{j}"].field)
        nontrivial[("w1", f"w{j}")] = _coefficients_in_basis(b, centre)
    trivial_ok = True
    names = gens + ["w12", "w13", "w14"]
    for i, ni in enumerate(names):
        for nj in names[i + 1:]:
            if ni == "w1" and nj in ("w2", "w3", "w4"):
                continue
            if not lie_bracket(w[ni].field, w[nj].field).is_zero():
                trivial_ok = False
    return {"nontrivial": nontrivial, "others_vanish": trivial_ok}


def transitivity_rank(samples: int = 20, seed: int = 0) -> int:
    """Minimum rank of the 7x7 matrix of w-field values at random points."""
    rng = np.random.default_rng(seed)
    w = w_fields()
    order = ["w1", "w2", "w3", "w4", "w12", "w13", "w14"]
    worst = 7
    for p in fields.random_points(ADAPTED, samples, rng) * 2.0:
        m = np.stack([w[name].field(p) for name in order])
        s = np.linalg.svd(m, compute_uv=False)
        worst = min(worst, int(np.sum(s > 1e-9 * s[0])))
    return worst


@dataclass(frozen=True)
class FlowInvarianceReport:
    horizontality_residual: float
    relative_length_change: float


def flow_invariance_report(v: SymmetryField, states: np.ndarray, times: np.ndarray,
                           tangents: np.ndarray, s: float,
                           dt: float = 1e-3) -> FlowInvarianceReport:
    """Push a horizontal curve through Fl^s_v and measure what it preserves.

    Tangents are transported exactly by the differential of the flow map
    (variational equation), re-expressed in the frame N1..N4; the report
    carries the worst distance from the horizontal bundle relative to speed
    and the relative change of sub-Riemannian arc length.
    """
    worst = 0.0
    speeds_before = np.empty(len(states))
    speeds_after = np.empty(len(states))
    for i, (q, qdot) in enumerate(zip(states, tangents)):
        u0, _ = _frame_split(qdot, nilpotent_frame_matrix(q))
        speeds_before[i] = np.linalg.norm(u0)
        P, J = flow_with_jacobian(v, AdaptedPoint.from_array(q), s, dt)
        w = J @ qdot
        u1, res = _frame_split(w, nilpotent_frame_matrix(P.array))
        speeds_after[i] = np.linalg.norm(u1)
        worst = max(worst, res / max(speeds_after[i], 1e-300))
    len_before = float(np.trapezoid(speeds_before, times))
    len_after = float(np.trapezoid(speeds_after, times))
    return FlowInvarianceReport(
        horizontality_residual=worst,
        relative_length_change=abs(len_after - len_before) / max(len_before, 1e-300),
    )


def _frame_split(w: np.ndarray, F: np.ndarray) -> tuple[np.ndarray, float]:
    """Coefficients of w in N1..N4 plus the off-distribution residual norm."""
    u = np.array([w[0], w[1], w[2], w[3]])
    res = float(np.linalg.norm(w[4:7] - w[0] * F[0, 4:7]))
    return u, res
