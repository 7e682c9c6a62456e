"""Kinematics and constraint analysis of the trident mechanism.

The mechanism is an equilateral-triangle root block with three one-link
legs attached at its vertices.  Legs 1 and 3 are rigidly attached at anchor
angles -2*pi/3 and +2*pi/3; leg 2 additionally carries a revolute joint
(angle phi).  All three legs are prismatic with lengths l1, l2, l3, and
each leg ends in a passive wheel that can neither slip nor slide sideways.

Configurations live in R^7 with original-chart coordinates
(x, y, theta, phi, l1, l2, l3).  The no-side-slip conditions give three
Pfaffian constraint one-forms whose common kernel is the rank-4 horizontal
distribution spanned by the frame X1..X4 built here.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
import sympy as sp

from . import fields
from .errors import ChartMismatch, DegenerateGrowth, SingularConfiguration
from .fields import ORIGINAL, ADAPTED, SQRT3, VectorFieldSym, coords, lie_bracket

#: l2 or L = l1 + l3 + 2 closer to zero than this is a singular configuration
SINGULAR_EPS = 1e-9

#: default relative singular-value cutoff for rank decisions
RANK_TOL = 1e-9

#: central-difference step for numeric brackets (Richardson pair uses step/2)
FD_STEP = 1e-4


@dataclass(frozen=True)
class MechanismConstants:
    """Branch anchor angles; leg 2's anchor angle is 0 by convention."""

    alpha1: float = -2.0 * math.pi / 3.0
    alpha3: float = 2.0 * math.pi / 3.0


CONSTANTS = MechanismConstants()


@dataclass(frozen=True)
class Configuration:
    """A point of the 7-dim configuration space in a tagged chart."""

    chart: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.chart not in fields.CHART_COORDS:
            raise ChartMismatch(f"unknown chart {self.chart!r}")
        vals = tuple(float(v) for v in self.values)
        if len(vals) != 7:
            raise ValueError("a configuration has exactly 7 coordinates")
        object.__setattr__(self, "values", vals)

    @classmethod
    def original(cls, x, y, theta, phi, l1, l2, l3) -> "Configuration":
        return cls(ORIGINAL, (x, y, theta, phi, l1, l2, l3))

    @classmethod
    def adapted(cls, x, l1, l2, l3, y1, y2, y3) -> "Configuration":
        return cls(ADAPTED, (x, l1, l2, l3, y1, y2, y3))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.values)

    def coord(self, name: str) -> float:
        return self.values[fields.CHART_COORDS[self.chart].index(name)]

    def legs(self) -> tuple[float, float, float]:
        if self.chart == ORIGINAL:
            return self.values[4:7]
        return self.values[1:4]

    def is_mechanically_valid(self) -> bool:
        """Positive leg lengths; a predicate, never a construction-time check."""
        return all(l > 0.0 for l in self.legs())

    def to_json(self) -> dict:
        return {"chart": self.chart, "point": list(self.values)}

    @classmethod
    def from_json(cls, obj: dict) -> "Configuration":
        return cls(obj["chart"], tuple(obj["point"]))


def reference_configuration() -> Configuration:
    """The base point q0 = (0, 0, pi/2, 0, 1, 1, 1) used by all analyses."""
    return Configuration.original(0.0, 0.0, math.pi / 2.0, 0.0, 1.0, 1.0, 1.0)


def leg_span(q: Configuration) -> float:
    """L = l1 + l3 + 2, the combined span of the two fixed branches."""
    l1, _, l3 = q.legs()
    return l1 + l3 + 2.0


def _require_original(q: Configuration, op: str) -> None:
    if q.chart != ORIGINAL:
        raise ChartMismatch(f"{op} expects the original chart, got {q.chart!r}")


def wheel_positions(q: Configuration) -> np.ndarray:
    """Planar positions of the three wheels, one row per wheel.

    Wheel i sits at distance 1 + l_i from the block centre along the leg
    direction; leg 2's direction is rotated by the revolute angle phi from
    its vertex direction.
    """
    _require_original(q, "wheel_positions")
    x, y, th, ph, l1, l2, l3 = q.values
    out = np.empty((3, 2))
    for row, (alpha, l) in enumerate(((CONSTANTS.alpha1, l1), (0.0, l2), (CONSTANTS.alpha3, l3))):
        if row == 1:
            out[row, 0] = x + math.cos(th) + l * math.cos(th + ph)
            out[row, 1] = y + math.sin(th) + l * math.sin(th + ph)
        else:
            out[row, 0] = x + (1.0 + l) * math.cos(th + alpha)
            out[row, 1] = y + (1.0 + l) * math.sin(th + alpha)
    return out


def root_vertices(q: Configuration) -> np.ndarray:
    """Planar positions of the three root-block vertices (unit circumradius)."""
    _require_original(q, "root_vertices")
    x, y, th = q.values[:3]
    angles = (th + CONSTANTS.alpha1, th, th + CONSTANTS.alpha3)
    return np.array([[x + math.cos(a), y + math.sin(a)] for a in angles])


def pfaff_matrix(q: Configuration) -> np.ndarray:
    """The 3x7 matrix of constraint one-forms in the basis (dx..dl3).

    Row k is the no-side-slip one-form of wheel k, obtained by pairing the
    wheel-velocity equations with the direction normal to the wheel plane.
    The dl_i columns vanish identically: changing a leg length alone never
    slips a wheel sideways.
    """
    _require_original(q, "pfaff_matrix")
    x, y, th, ph, l1, l2, l3 = q.values
    m = np.zeros((3, 7))
    m[0] = (-math.sin(th + CONSTANTS.alpha1), math.cos(th + CONSTANTS.alpha1),
            1.0 + l1, 0.0, 0.0, 0.0, 0.0)
    m[1] = (-math.sin(th + ph), math.cos(th + ph),
            math.cos(ph) + l2, l2, 0.0, 0.0, 0.0)
    m[2] = (-math.sin(th + CONSTANTS.alpha3), math.cos(th + CONSTANTS.alpha3),
            1.0 + l3, 0.0, 0.0, 0.0, 0.0)
    return m


def _check_regular(q: Configuration) -> None:
    _, l2, _ = q.legs()
    if abs(l2) < SINGULAR_EPS:
        raise SingularConfiguration(f"l2 = {l2} is numerically zero")
    L = leg_span(q)
    if abs(L) < SINGULAR_EPS:
        raise SingularConfiguration(f"L = l1 + l3 + 2 = {L} is numerically zero")


def _frame_at(arr: np.ndarray) -> np.ndarray:
    """Frame rows X1..X4 at original-chart coordinates arr, as a 4x7 array.

    X2..X4 are exactly the leg coordinate fields.  X1 spans the remaining
    kernel direction of the Pfaffian matrix, gauged to unit component along
    the body-frame x-axis (the direction that is d/dx when theta = pi/2);
    on that slice this is exactly the 'dx-coefficient = 1' normalization.
    """
    q = Configuration(ORIGINAL, tuple(arr))
    _check_regular(q)
    m4 = pfaff_matrix(q)[:, :4]
    _, s, vt = np.linalg.svd(m4)
    if s[2] < 1e-12 * s[0]:
        raise SingularConfiguration("Pfaffian kernel is not one-dimensional")
    v = vt[-1]
    delta = arr[2] - math.pi / 2.0
    gauge = v[0] * math.cos(delta) + v[1] * math.sin(delta)
    if abs(gauge) < SINGULAR_EPS:
        raise SingularConfiguration("frame gauge degenerates at this configuration")
    frame = np.zeros((4, 7))
    frame[0, :4] = v / gauge
    frame[1, 4] = 1.0
    frame[2, 5] = 1.0
    frame[3, 6] = 1.0
    return frame


def horizontal_frame(q: Configuration) -> np.ndarray:
    """A basis X1..X4 of the horizontal distribution at q (rows of a 4x7 array)."""
    _require_original(q, "horizontal_frame")
    return _frame_at(q.array)


@functools.lru_cache(maxsize=1)
def horizontal_frame_slice() -> tuple[VectorFieldSym, ...]:
    """Closed-form frame on the slice x = y = 0, theta = pi/2.

    Valid for arbitrary (phi, l1, l2, l3); the coefficients depend on the
    shape variables only, so brackets against the leg fields taken from
    these expressions agree with the true brackets on the slice.
    """
    x, y, th, ph, l1, l2, l3 = coords(ORIGINAL)
    L = l1 + l3 + 2
    x1 = VectorFieldSym(ORIGINAL, (
        sp.Integer(1),
        (l1 - l3) * SQRT3 / (3 * L),
        -1 / L,
        (sp.sin(ph) * SQRT3 * (l1 - l3) + 3 * sp.cos(ph) * (L + 1) + 3 * l2) / (3 * l2 * L),
        0, 0, 0,
    ))
    return (x1,
            fields.coordinate_field(ORIGINAL, 4),
            fields.coordinate_field(ORIGINAL, 5),
            fields.coordinate_field(ORIGINAL, 6))


@functools.lru_cache(maxsize=1)
def slice_bracket_fields() -> tuple[VectorFieldSym, ...]:
    """Exact X12 = [X1,X2], X13 = [X1,X3], X14 = [X1,X4] on the slice."""
    x1, x2, x3, x4 = horizontal_frame_slice()
    return (lie_bracket(x1, x2), lie_bracket(x1, x3), lie_bracket(x1, x4))


def _frame_jacobians(arr: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    """(4,7,7) array of frame-field Jacobians by Richardson-extrapolated
    central differences: J[k,i,j] = d(X_k)^i / dq^j."""

    def jac(h: float) -> np.ndarray:
        J = np.empty((4, 7, 7))
        for j in range(7):
            dq = np.zeros(7)
            dq[j] = h
            J[:, :, j] = (_frame_at(arr + dq) - _frame_at(arr - dq)) / (2.0 * h)
        return J

    return (4.0 * jac(step / 2.0) - jac(step)) / 3.0


def bracket_fd(F, G, arr: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    """[F,G](q) for numeric vector fields F, G: R^7 -> R^7 via FD Jacobians."""

    def jac(field, h):
        J = np.empty((7, 7))
        for j in range(7):
            dq = np.zeros(7)
            dq[j] = h
            J[:, j] = (field(arr + dq) - field(arr - dq)) / (2.0 * h)
        return J

    def rich(field):
        return (4.0 * jac(field, step / 2.0) - jac(field, step)) / 3.0

    return rich(G) @ F(arr) - rich(F) @ G(arr)


def _is_on_slice(arr: np.ndarray, tol: float = 1e-12) -> bool:
    return abs(arr[0]) < tol and abs(arr[1]) < tol and abs(arr[2] - math.pi / 2.0) < tol


def _frame_brackets(arr: np.ndarray, method: str = "auto") -> np.ndarray:
    """(3,7) array of [X1,X2], [X1,X3], [X1,X4] at arr.

    method 'symbolic' evaluates the exact slice brackets (requires the
    point to be on the slice); 'fd' always differentiates the numeric
    frame; 'auto' picks symbolic on the slice.
    """
    if method == "auto":
        method = "symbolic" if _is_on_slice(arr) else "fd"
    if method == "symbolic":
        if not _is_on_slice(arr):
            raise ChartMismatch("symbolic brackets are only available on the slice x=y=0, theta=pi/2")
        return np.stack([b(arr) for b in slice_bracket_fields()])
    J = _frame_jacobians(arr)
    F = _frame_at(arr)
    return np.stack([J[i] @ F[0] - J[0] @ F[i] for i in (1, 2, 3)])


def _rank(m: np.ndarray, tol: float) -> int:
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


@dataclass(frozen=True)
class ControllabilityResult:
    gbar: np.ndarray          # rows X1..X4, X12, X13, X14 at q
    det: float
    growth: tuple[int, int]   # (rank of the frame, rank after one bracket level)

    @property
    def det_nonzero(self) -> bool:
        return self.growth == (4, 7)


def controllability(q: Configuration, rank_tol: float = RANK_TOL,
                    method: str = "auto") -> ControllabilityResult:
    """Rank test of the bracket-generated distribution at q.

    Stacks the frame and its first-level brackets into the 7x7 matrix Gbar
    and computes the growth vector (rank of the frame, rank of Gbar) with a
    relative singular-value cutoff.  Locally controllable configurations
    have growth (4, 7) and det Gbar != 0.
    """
    _require_original(q, "controllability")
    arr = q.array
    frame = _frame_at(arr)
    brackets = _frame_brackets(arr, method)
    gbar = np.vstack([frame, brackets])
    d1 = _rank(frame, rank_tol)
    d2 = _rank(gbar, rank_tol)
    return ControllabilityResult(gbar=gbar, det=float(np.linalg.det(gbar)), growth=(d1, d2))


@dataclass(frozen=True)
class DynamicPairResult:
    rank_v0: int
    rank_v1: int
    transversal: bool


def check_dynamic_pair(q: Configuration, f: float, rank_tol: float = RANK_TOL) -> DynamicPairResult:
    """Regularity of the dynamic pair with drift f*X1 and inputs X2, X3, X4.

    V0 = span(X2,X3,X4), V1 = V0 + [f*X1, V0]; at regular points the ranks
    are (3, 6) and V1 + <f*X1> fills the tangent space.
    """
    _require_original(q, "check_dynamic_pair")
    if f == 0.0:
        raise ValueError("f must be a nonzero constant")
    arr = q.array
    frame = _frame_at(arr)
    drift = f * frame[0]

    def drift_field(a: np.ndarray) -> np.ndarray:
        return f * _frame_at(a)[0]

    v0 = frame[1:4]
    brackets = np.stack([
        bracket_fd(drift_field, lambda a, i=i: _frame_at(a)[i], arr)
        for i in (1, 2, 3)
    ])
    v1 = np.vstack([v0, brackets])
    full = np.vstack([v1, drift[None, :]])
    return DynamicPairResult(
        rank_v0=_rank(v0, rank_tol),
        rank_v1=_rank(v1, rank_tol),
        transversal=_rank(full, rank_tol) == 7,
    )


@dataclass(frozen=True)
class SignatureResult:
    """Unordered signature (p, r) of the Pfaffian quadratic form.

    Stored with p >= r; (p, r) and (r, p) are the same signature because
    the 4-form line used to read off the Pfaffian carries no orientation.
    """

    p: int
    r: int
    eig_tol: float

    def __post_init__(self):
        a, b = sorted((int(self.p), int(self.r)), reverse=True)
        object.__setattr__(self, "p", a)
        object.__setattr__(self, "r", b)

    def as_tuple(self) -> tuple[int, int]:
        return (self.p, self.r)


def _pfaffian4(a: np.ndarray) -> float:
    # Pfaffian of a 4x4 antisymmetric matrix
    return a[0, 1] * a[2, 3] - a[0, 2] * a[1, 3] + a[0, 3] * a[1, 2]


def pfaffian_signature(q: Configuration, eig_tol: float = RANK_TOL,
                       method: str = "auto") -> SignatureResult:
    """Signature of the Pfaffian quadratic form on the constraint annihilator.

    For the annihilator basis mu_1..mu_3 (the Pfaffian-constraint rows),
    form A_k with (A_k)_{ij} = -mu_k([X_i, X_j]); the quadratic form is
    c -> Pf(sum c_k A_k).  Its eigenvalue signs (counted against eig_tol
    times the natural bracket scale) give the signature, reported unordered.
    """
    _require_original(q, "pfaffian_signature")
    arr = q.array
    res = controllability(q, method=method)
    if res.growth[1] < 7:
        raise DegenerateGrowth(f"growth vector {res.growth} at {q.values}")
    mus = pfaff_matrix(q)
    frame = _frame_at(arr)
    use_symbolic = method == "symbolic" or (method == "auto" and _is_on_slice(arr))
    brackets = {}
    if use_symbolic:
        top = _frame_brackets(arr, "symbolic")
        for col, (i, j) in enumerate(((0, 1), (0, 2), (0, 3))):
            brackets[(i, j)] = top[col]
        # leg fields are exactly constant: their mutual brackets vanish
        for (i, j) in ((1, 2), (1, 3), (2, 3)):
            brackets[(i, j)] = np.zeros(7)
    else:
        J = _frame_jacobians(arr)
        for (i, j) in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)):
            brackets[(i, j)] = J[j] @ frame[i] - J[i] @ frame[j]

    A = np.zeros((3, 4, 4))
    for k in range(3):
        for (i, j), b in brackets.items():
            val = -float(mus[k] @ b)
            A[k, i, j] = val
            A[k, j, i] = -val
    return _signature_of_pfaffian_form(A, eig_tol)


def _signature_of_pfaffian_form(A: np.ndarray, eig_tol: float) -> SignatureResult:
    """Signature of c -> Pf(sum c_k A_k) for a (3,4,4) stack of antisymmetric
    matrices, recovered by polarization."""
    S = np.empty((3, 3))
    for k in range(3):
        S[k, k] = _pfaffian4(A[k])
    for k in range(3):
        for l in range(k + 1, 3):
            S[k, l] = S[l, k] = 0.5 * (_pfaffian4(A[k] + A[l]) - S[k, k] - S[l, l])

    # the Pfaffian is quadratic in the A-entries, so eigenvalues are
    # compared against the square of the bracket scale
    scale = max(float(np.abs(A).max()) ** 2, float(np.abs(S).max()))
    lam = np.linalg.eigvalsh(S)
    cut = eig_tol * max(scale, 1e-300)
    p = int(np.sum(lam > cut))
    r = int(np.sum(lam < -cut))
    return SignatureResult(p=p, r=r, eig_tol=eig_tol)


def serialize_matrix(m: np.ndarray) -> dict:
    """Row-major JSON form with an explicit shape field."""
    arr = np.asarray(m, dtype=float)
    return {"shape": list(arr.shape), "data": [float(v) for v in arr.ravel()]}


def matrix_from_json(obj: dict) -> np.ndarray:
    return np.array(obj["data"], dtype=float).reshape(obj["shape"])
