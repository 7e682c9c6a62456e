"""Adapted coordinates, the nilpotent frame, and the Lie group structure.

The adapted chart (x, l1, l2, l3, y1, y2, y3) is reached from the original
chart by an affine change that keeps x and the leg lengths and replaces
(y, theta, phi) by

    y1 = -2x - 2*sqrt(3)*y - 8*theta
    y2 = (4/5)*phi - (4/5)*x + (8/5)*theta
    y3 = -2x + 2*sqrt(3)*y - 8*theta.

In this chart the step-2 nilpotent frame N1..N4 generates a 7-dimensional
Lie algebra with [N1,N2] = d/dy1, [N1,N3] = d/dy2, [N1,N4] = d/dy3 and all
other brackets zero.  R^7 with the polynomial product ``group_mul`` is the
corresponding simply connected group; the frame is left-invariant for it.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
import sympy as sp

from . import fields
from .errors import ChartMismatch
from .fields import ADAPTED, ORIGINAL, SQRT3, VectorFieldSym, coordinate_field, coords, lie_bracket
from .mechanism import Configuration

_S3 = math.sqrt(3.0)


@dataclass(frozen=True)
class AdaptedPoint:
    """A point of the adapted chart / an element of the nilpotent group."""

    x: float = 0.0
    l1: float = 0.0
    l2: float = 0.0
    l3: float = 0.0
    y1: float = 0.0
    y2: float = 0.0
    y3: float = 0.0

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.l1, self.l2, self.l3, self.y1, self.y2, self.y3])

    @classmethod
    def from_array(cls, arr) -> "AdaptedPoint":
        return cls(*(float(v) for v in arr))

    def as_configuration(self) -> Configuration:
        return Configuration(ADAPTED, tuple(self.array))

    @classmethod
    def from_configuration(cls, q: Configuration) -> "AdaptedPoint":
        if q.chart != ADAPTED:
            raise ChartMismatch("expected an adapted-chart configuration")
        return cls(*q.values)

    def to_json(self) -> dict:
        return {"chart": ADAPTED, "point": [float(v) for v in self.array]}

    @classmethod
    def from_json(cls, obj: dict) -> "AdaptedPoint":
        if obj.get("chart") != ADAPTED:
            raise ChartMismatch("expected an adapted-chart point")
        return cls.from_array(obj["point"])


#: a group element is just an adapted point under group_mul
GroupElement = AdaptedPoint


def to_adapted(q: Configuration) -> AdaptedPoint:
    """Original chart -> adapted chart (linear; x and the legs pass through)."""
    if q.chart != ORIGINAL:
        raise ChartMismatch("to_adapted expects the original chart")
    x, y, th, ph, l1, l2, l3 = q.values
    return AdaptedPoint(
        x=x, l1=l1, l2=l2, l3=l3,
        y1=-2.0 * x - 2.0 * _S3 * y - 8.0 * th,
        y2=0.8 * ph - 0.8 * x + 1.6 * th,
        y3=-2.0 * x + 2.0 * _S3 * y - 8.0 * th,
    )


def from_adapted(p: AdaptedPoint) -> Configuration:
    """Adapted chart -> original chart, the exact inverse of to_adapted."""
    ph = 1.25 * p.y2 + 1.5 * p.x + 0.125 * p.y1 + 0.125 * p.y3
    th = -p.y1 / 16.0 - p.y3 / 16.0 - p.x / 4.0
    y = -_S3 / 12.0 * (p.y1 - p.y3)
    return Configuration.original(p.x, y, th, ph, p.l1, p.l2, p.l3)


def adapted_jacobian() -> np.ndarray:
    """Constant 7x7 Jacobian of to_adapted (pushforward original->adapted)."""
    T = np.zeros((7, 7))
    T[0, 0] = 1.0
    T[1, 4] = T[2, 5] = T[3, 6] = 1.0
    T[4] = (-2.0, -2.0 * _S3, -8.0, 0.0, 0.0, 0.0, 0.0)
    T[5] = (-0.8, 0.0, 1.6, 0.8, 0.0, 0.0, 0.0)
    T[6] = (-2.0, 2.0 * _S3, -8.0, 0.0, 0.0, 0.0, 0.0)
    return T


@functools.lru_cache(maxsize=1)
def nilpotent_frame() -> tuple[VectorFieldSym, ...]:
    """The frame N1..N4 in the adapted chart."""
    x, l1, l2, l3, y1, y2, y3 = coords(ADAPTED)
    n1 = VectorFieldSym(ADAPTED, (
        sp.Integer(1), 0, 0, 0,
        -(-SQRT3 / 2 * x + l1 - 1),
        -(l2 - 1),
        -(SQRT3 / 2 * x + l3 - 1),
    ))
    return (n1,
            coordinate_field(ADAPTED, 1),
            coordinate_field(ADAPTED, 2),
            coordinate_field(ADAPTED, 3))


@functools.lru_cache(maxsize=1)
def extended_frame() -> tuple[VectorFieldSym, ...]:
    """N1..N4 followed by N12 = [N1,N2], N13 = [N1,N3], N14 = [N1,N4]."""
    n1, n2, n3, n4 = nilpotent_frame()
    return (n1, n2, n3, n4,
            lie_bracket(n1, n2), lie_bracket(n1, n3), lie_bracket(n1, n4))


def nilpotent_frame_matrix(arr) -> np.ndarray:
    """Fast numeric frame evaluation: rows N1..N4 at adapted coordinates arr."""
    x, l1, l2, l3 = float(arr[0]), float(arr[1]), float(arr[2]), float(arr[3])
    F = np.zeros((4, 7))
    F[0, 0] = 1.0
    F[0, 4] = 1.0 + _S3 / 2.0 * x - l1
    F[0, 5] = 1.0 - l2
    F[0, 6] = 1.0 - _S3 / 2.0 * x - l3
    F[1, 1] = F[2, 2] = F[3, 3] = 1.0
    return F


def group_identity() -> AdaptedPoint:
    return AdaptedPoint()


def group_mul(p: AdaptedPoint, q: AdaptedPoint) -> AdaptedPoint:
    """The nilpotent group product on R^7."""
    return AdaptedPoint(
        x=p.x + q.x,
        l1=p.l1 + q.l1, l2=p.l2 + q.l2, l3=p.l3 + q.l3,
        y1=p.y1 + q.y1 + _S3 / 2.0 * p.x * q.x - p.l1 * q.x,
        y2=p.y2 + q.y2 - p.l2 * q.x,
        y3=p.y3 + q.y3 - _S3 / 2.0 * p.x * q.x - p.l3 * q.x,
    )


def group_inverse(p: AdaptedPoint) -> AdaptedPoint:
    """Two-sided inverse under group_mul (solve p * pbar = identity)."""
    return AdaptedPoint(
        x=-p.x,
        l1=-p.l1, l2=-p.l2, l3=-p.l3,
        y1=-p.y1 + _S3 / 2.0 * p.x ** 2 - p.l1 * p.x,
        y2=-p.y2 - p.l2 * p.x,
        y3=-p.y3 - _S3 / 2.0 * p.x ** 2 - p.l3 * p.x,
    )


def left_translation_jacobian(g: AdaptedPoint) -> np.ndarray:
    """d(L_g) -- exact, point-independent because the product is affine in
    the right factor."""
    J = np.eye(7)
    J[4, 0] = _S3 / 2.0 * g.x - g.l1
    J[5, 0] = -g.l2
    J[6, 0] = -_S3 / 2.0 * g.x - g.l3
    return J


@dataclass(frozen=True)
class LeftInvarianceReport:
    field_ok: bool
    max_residual: float
    samples: int


def check_left_invariance(X: VectorFieldSym, samples: int = 1000, seed: int = 0,
                          tol: float = 1e-9, box: float = 2.0) -> LeftInvarianceReport:
    """Check dL_g(X(p)) = X(g*p) at random (g, p) pairs."""
    if X.chart != ADAPTED:
        raise ChartMismatch("left invariance is defined on the adapted chart")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        g = AdaptedPoint.from_array(rng.uniform(-box, box, 7))
        p = AdaptedPoint.from_array(rng.uniform(-box, box, 7))
        lhs = left_translation_jacobian(g) @ X(p.array)
        rhs = X(group_mul(g, p).array)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return LeftInvarianceReport(field_ok=worst < tol, max_residual=worst, samples=samples)


def _in_span_residual(w: np.ndarray, at: np.ndarray) -> float:
    """Distance of w from E + V at a point: the y-components must match
    w_x times the y-components of N1 there (the leg part is free)."""
    n1 = nilpotent_frame_matrix(at)[0]
    return float(np.max(np.abs(w[4:7] - w[0] * n1[4:7])))


@dataclass(frozen=True)
class PathGeometryReport:
    frame_rank_ok: bool
    v_brackets_in_ev: bool
    mixed_brackets_outside: bool
    min_mixed_residual: float
    samples: int

    @property
    def all_ok(self) -> bool:
        return self.frame_rank_ok and self.v_brackets_in_ev and self.mixed_brackets_outside


def check_path_geometry_conditions(samples: int = 25, seed: int = 0) -> PathGeometryReport:
    """Structural checks of the splitting E = <N1>, V = <N2,N3,N4>.

    (1) E and V stay transversal (the frame has rank 4 at random points).
    (2) Brackets of V-sections with random affine coefficients land in
        E + V (their bracket is again vertical: checked symbolically).
    (3) For generic sections xi in E and nu in V that do not vanish at a
        point, [xi, nu] at that point leaves E + V.
    """
    rng = np.random.default_rng(seed)
    n = nilpotent_frame()
    cs = coords(ADAPTED)

    def affine_coeff():
        c = rng.integers(-3, 4, size=8)
        return sp.Integer(int(c[0])) + sum(int(ci) * s for ci, s in zip(c[1:], cs))

    pts = fields.random_points(ADAPTED, samples, rng) * 2.0

    rank_ok = True
    for p in pts:
        F = nilpotent_frame_matrix(p)
        if _rank4(F) != 4:
            rank_ok = False

    v_ok = True
    for _ in range(4):
        nu = _combine(n[1:], [affine_coeff() for _ in range(3)])
        nu2 = _combine(n[1:], [affine_coeff() for _ in range(3)])
        b = lie_bracket(nu, nu2)
        # vertical fields close among themselves: x- and y-components vanish
        for idx in (0, 4, 5, 6):
            if not fields.is_zero_expr(b.components[idx]):
                v_ok = False

    min_res = math.inf
    outside_ok = True
    for p in pts[: min(10, len(pts))]:
        while True:
            f = affine_coeff()
            coeffs = [affine_coeff() for _ in range(3)]
            avals = [fields.evaluate(c, p, ADAPTED) for c in coeffs]
            fval = fields.evaluate(f, p, ADAPTED)
            if abs(fval) > 0.1 and np.linalg.norm(avals) > 0.1:
                break
        xi = f * n[0]
        nu = _combine(n[1:], coeffs)
        w = lie_bracket(xi, nu)(p)
        res = _in_span_residual(w, p)
        expected = abs(fval) * float(np.linalg.norm(avals, ord=np.inf))
        min_res = min(min_res, res)
        if res < 0.5 * expected or res < 1e-9:
            outside_ok = False

    return PathGeometryReport(
        frame_rank_ok=rank_ok,
        v_brackets_in_ev=v_ok,
        mixed_brackets_outside=outside_ok,
        min_mixed_residual=min_res,
        samples=samples,
    )


def _combine(fields_, coeffs) -> VectorFieldSym:
    out = coeffs[0] * fields_[0]
    for c, f in zip(coeffs[1:], fields_[1:]):
        out = out + c * f
    return out


def _rank4(m: np.ndarray) -> int:
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > 1e-9 * s[0]))
