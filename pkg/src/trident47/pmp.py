"""Normal extremal trajectories of the nilpotent control problem.

The energy-minimizing controls of the left-invariant system on the group
satisfy u_i = h_i where h_1..h_4 are the momenta paired with N1..N4 and
h_5..h_7 are paired with the bracket directions.  The momenta obey the
fibre system (position-independent)

    h1' = -h5 h2 - h6 h3 - h7 h4,   h2' = h5 h1,   h3' = h6 h1,
    h4' = h7 h1,                    h5' = h6' = h7' = 0,

and the state follows the base system q' = h1 N1(q) + h2 N2 + h3 N3 + h4 N4.
With K = sqrt(C5^2 + C6^2 + C7^2) > 0, h1 is a pure oscillation of
frequency K and x, l1, l2, l3 integrate in closed form; the y-components
are obtained by quadrature.  K = 0 gives straight lines.  Three worked
example solutions are built in, including their original-chart formulas.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ChartMismatch, SingularConfiguration, ZeroHorizontalMomentum
from .fields import ADAPTED, ORIGINAL
from .mechanism import Configuration, horizontal_frame, reference_configuration
from .nilpotent import AdaptedPoint, from_adapted, nilpotent_frame_matrix, to_adapted

_S3 = math.sqrt(3.0)

#: advisory threshold on Hamiltonian drift per unit time
H_DRIFT_LIMIT = 1e-6


@dataclass(frozen=True)
class FibreState:
    """Momenta (h1..h7); h1..h4 double as the controls along extremals."""

    h1: float = 0.0
    h2: float = 0.0
    h3: float = 0.0
    h4: float = 0.0
    h5: float = 0.0
    h6: float = 0.0
    h7: float = 0.0

    @property
    def array(self) -> np.ndarray:
        return np.array([self.h1, self.h2, self.h3, self.h4, self.h5, self.h6, self.h7])

    @classmethod
    def from_array(cls, arr) -> "FibreState":
        return cls(*(float(v) for v in arr))

    def horizontal_norm(self) -> float:
        return math.sqrt(self.h1**2 + self.h2**2 + self.h3**2 + self.h4**2)


def hamiltonian(h) -> float:
    """H = (h1^2 + h2^2 + h3^2 + h4^2) / 2."""
    arr = h.array if isinstance(h, FibreState) else np.asarray(h, dtype=float)
    return 0.5 * float(arr[0]**2 + arr[1]**2 + arr[2]**2 + arr[3]**2)


def normalize_arclength(h0: FibreState) -> FibreState:
    """Scale (h1..h4) to unit norm; the bracket momenta are untouched."""
    n = h0.horizontal_norm()
    if n == 0.0:
        raise ZeroHorizontalMomentum("cannot normalize zero horizontal momentum")
    return FibreState(h0.h1 / n, h0.h2 / n, h0.h3 / n, h0.h4 / n, h0.h5, h0.h6, h0.h7)


def fibre_rhs(h) -> np.ndarray:
    """Right-hand side of the momentum system."""
    a = h.array if isinstance(h, FibreState) else np.asarray(h, dtype=float)
    out = np.zeros(7)
    out[0] = -a[4] * a[1] - a[5] * a[2] - a[6] * a[3]
    out[1] = a[4] * a[0]
    out[2] = a[5] * a[0]
    out[3] = a[6] * a[0]
    return out


def base_rhs(q, h) -> np.ndarray:
    """Right-hand side of the state system q' = sum h_i N_i(q)."""
    qa = q.array if isinstance(q, AdaptedPoint) else np.asarray(q, dtype=float)
    ha = h.array if isinstance(h, FibreState) else np.asarray(h, dtype=float)
    x, l1, l2, l3 = qa[0], qa[1], qa[2], qa[3]
    h1 = ha[0]
    out = np.empty(7)
    out[0] = h1
    out[1] = ha[1]
    out[2] = ha[2]
    out[3] = ha[3]
    out[4] = (1.0 + _S3 / 2.0 * x - l1) * h1
    out[5] = (1.0 - l2) * h1
    out[6] = (1.0 - _S3 / 2.0 * x - l3) * h1
    return out


# ---------------------------------------------------------------------------
# closed forms


@dataclass(frozen=True)
class SolutionConstants:
    """Integration constants of the closed-form extremals.

    C5, C6, C7 are the (constant) bracket momenta; C11, C12 the oscillation
    amplitudes of h1; C13, C14, C15 the affine constants of h2, h3, h4.
    Exact solutions require C5*C13 + C6*C14 + C7*C15 = 0 when K > 0; see
    ``consistency_residual``.
    """

    C5: float = 0.0
    C6: float = 0.0
    C7: float = 0.0
    C11: float = 0.0
    C12: float = 0.0
    C13: float = 0.0
    C14: float = 0.0
    C15: float = 0.0

    @property
    def K(self) -> float:
        return math.sqrt(self.C5**2 + self.C6**2 + self.C7**2)

    def consistency_residual(self) -> float:
        return self.C5 * self.C13 + self.C6 * self.C14 + self.C7 * self.C15

    def initial_fibre_state(self) -> FibreState:
        return closed_form_fibre(self, 0.0)

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in ("C5", "C6", "C7", "C11", "C12", "C13", "C14", "C15")}

    @classmethod
    def from_json(cls, obj: dict) -> "SolutionConstants":
        keys = ("C5", "C6", "C7", "C11", "C12", "C13", "C14", "C15")
        return cls(**{k: float(obj[k]) for k in keys})


def random_solution_constants(rng, k_min: float = 0.1, k_max: float = 3.0) -> SolutionConstants:
    """Random constants satisfying the closed-form consistency constraint."""
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    K = rng.uniform(k_min, k_max)
    c567 = K * direction
    c11, c12 = rng.uniform(-1.0, 1.0, size=2)
    raw = rng.uniform(-1.0, 1.0, size=3)
    raw -= (raw @ direction) * direction  # project onto the admissible plane
    return SolutionConstants(C5=c567[0], C6=c567[1], C7=c567[2],
                             C11=c11, C12=c12,
                             C13=raw[0], C14=raw[1], C15=raw[2])


def closed_form_fibre(c: SolutionConstants, t: float) -> FibreState:
    """Exact momenta at time t.

    For K > 0: h1 = C11 cos(Kt) + C12 sin(Kt) and each of h2, h3, h4 is
    (C_j/K)(C11 sin(Kt) - C12 cos(Kt)) plus its affine constant; for K = 0
    all momenta are constant.
    """
    K = c.K
    if K == 0.0:
        return FibreState(c.C11, c.C13, c.C14, c.C15, 0.0, 0.0, 0.0)
    osc = c.C11 * math.sin(K * t) - c.C12 * math.cos(K * t)
    return FibreState(
        h1=c.C11 * math.cos(K * t) + c.C12 * math.sin(K * t),
        h2=c.C5 / K * osc + c.C13,
        h3=c.C6 / K * osc + c.C14,
        h4=c.C7 / K * osc + c.C15,
        h5=c.C5, h6=c.C6, h7=c.C7,
    )


def _closed_form_flat(c: SolutionConstants, t: float) -> tuple[float, float, float, float]:
    """x, l1, l2, l3 at time t, starting from the adapted origin."""
    K = c.K
    if K == 0.0:
        return (c.C11 * t, c.C13 * t, c.C14 * t, c.C15 * t)
    s, co = math.sin(K * t), math.cos(K * t)
    x = c.C11 / K * s - c.C12 / K * co + c.C12 / K
    hump = c.C11 - c.C11 * co - c.C12 * s
    return (x,
            c.C5 / K**2 * hump + c.C13 * t,
            c.C6 / K**2 * hump + c.C14 * t,
            c.C7 / K**2 * hump + c.C15 * t)


def _adaptive_simpson(f, a: float, b: float, tol: float = 1e-10, max_depth: int = 40) -> float:
    """Classic adaptive Simpson quadrature with the /15 error estimate."""
    def simpson(lo, hi, flo, fmid, fhi):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, eps, depth):
        mid = 0.5 * (lo + hi)
        lmid = 0.5 * (lo + mid)
        rmid = 0.5 * (mid + hi)
        fl, fr = f(lmid), f(rmid)
        left = simpson(lo, mid, flo, fl, fmid)
        right = simpson(mid, hi, fmid, fr, fhi)
        err = left + right - whole
        if depth >= max_depth or abs(err) <= 15.0 * eps:
            return left + right + err / 15.0
        return (recurse(lo, mid, flo, fl, fmid, left, eps / 2.0, depth + 1)
                + recurse(mid, hi, fmid, fr, fhi, right, eps / 2.0, depth + 1))

    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    mid = 0.5 * (a + b)
    fm = f(mid)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def _y_integrands(c: SolutionConstants):
    def dy1(s):
        x, l1, _, _ = _closed_form_flat(c, s)
        return (1.0 + _S3 / 2.0 * x - l1) * closed_form_fibre(c, s).h1

    def dy2(s):
        _, _, l2, _ = _closed_form_flat(c, s)
        return (1.0 - l2) * closed_form_fibre(c, s).h1

    def dy3(s):
        x, _, _, l3 = _closed_form_flat(c, s)
        return (1.0 - _S3 / 2.0 * x - l3) * closed_form_fibre(c, s).h1

    return dy1, dy2, dy3


def closed_form_base(c: SolutionConstants, t: float, quad_tol: float = 1e-10) -> AdaptedPoint:
    """Exact x, l1..l3 plus y1..y3 by adaptive quadrature, from the origin.

    Other starting points are reached by left-translating the result with
    the group product.
    """
    x, l1, l2, l3 = _closed_form_flat(c, t)
    dy1, dy2, dy3 = _y_integrands(c)
    return AdaptedPoint(
        x=x, l1=l1, l2=l2, l3=l3,
        y1=_adaptive_simpson(dy1, 0.0, t, quad_tol),
        y2=_adaptive_simpson(dy2, 0.0, t, quad_tol),
        y3=_adaptive_simpson(dy3, 0.0, t, quad_tol),
    )


# ---------------------------------------------------------------------------
# trajectories and integration


@dataclass(frozen=True)
class IntegrationDiagnostics:
    dt: float
    h_drift_max: float
    h_drift_rate: float
    casimir_drift: float
    step_too_large: bool

    def to_json(self) -> dict:
        return {
            "dt": self.dt,
            "h_drift_max": self.h_drift_max,
            "h_drift_rate": self.h_drift_rate,
            "casimir_drift": self.casimir_drift,
            "step_too_large": self.step_too_large,
        }


@dataclass(frozen=True)
class Trajectory:
    """A time-sampled curve; momenta/controls ride along when available."""

    chart: str
    times: np.ndarray
    states: np.ndarray
    momenta: np.ndarray | None = None
    controls: np.ndarray | None = None
    diagnostics: IntegrationDiagnostics | None = None

    def __post_init__(self):
        if self.chart not in (ORIGINAL, ADAPTED):
            raise ChartMismatch(f"unknown chart {self.chart!r}")

    def __len__(self) -> int:
        return len(self.times)

    def to_original(self) -> "Trajectory":
        """Convert the states to the original chart (no-op if already there)."""
        if self.chart == ORIGINAL:
            return self
        states = np.stack([
            from_adapted(AdaptedPoint.from_array(q)).array for q in self.states
        ])
        return Trajectory(ORIGINAL, self.times, states, self.momenta,
                          self.controls, self.diagnostics)

    def displacement(self) -> np.ndarray:
        return self.states[-1] - self.states[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trajectory):
            return NotImplemented
        def same(a, b):
            if a is None or b is None:
                return a is None and b is None
            return a.shape == b.shape and bool(np.all(a == b))
        return (self.chart == other.chart and same(self.times, other.times)
                and same(self.states, other.states) and same(self.momenta, other.momenta)
                and same(self.controls, other.controls))


def _grid(T: float, dt: float) -> tuple[int, float]:
    if dt <= 0.0 or T <= 0.0:
        raise ValueError("T and dt must be positive")
    n = max(1, int(round(T / dt)))
    return n, T / n


def _hamiltonian_rhs(y: np.ndarray) -> np.ndarray:
    """Coupled (state, momentum) right-hand side; works on (..., 14) arrays."""
    out = np.empty_like(y)
    x, l1, l2, l3 = y[..., 0], y[..., 1], y[..., 2], y[..., 3]
    h1, h2, h3, h4 = y[..., 7], y[..., 8], y[..., 9], y[..., 10]
    h5, h6, h7 = y[..., 11], y[..., 12], y[..., 13]
    out[..., 0] = h1
    out[..., 1] = h2
    out[..., 2] = h3
    out[..., 3] = h4
    out[..., 4] = (1.0 + _S3 / 2.0 * x - l1) * h1
    out[..., 5] = (1.0 - l2) * h1
    out[..., 6] = (1.0 - _S3 / 2.0 * x - l3) * h1
    out[..., 7] = -h5 * h2 - h6 * h3 - h7 * h4
    out[..., 8] = h5 * h1
    out[..., 9] = h6 * h1
    out[..., 10] = h7 * h1
    out[..., 11] = 0.0
    out[..., 12] = 0.0
    out[..., 13] = 0.0
    return out


def _rk4_path(y0: np.ndarray, n: int, h: float) -> np.ndarray:
    """Fixed-step RK4 of the Hamiltonian system, all samples retained."""
    path = np.empty((n + 1,) + y0.shape)
    path[0] = y0
    y = y0
    for k in range(n):
        k1 = _hamiltonian_rhs(y)
        k2 = _hamiltonian_rhs(y + 0.5 * h * k1)
        k3 = _hamiltonian_rhs(y + 0.5 * h * k2)
        k4 = _hamiltonian_rhs(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        path[k + 1] = y
    return path


def integrate_extremal(h0: FibreState, q0: AdaptedPoint, T: float, dt: float = 1e-3) -> Trajectory:
    """RK4 integration of the coupled 14-dim Hamiltonian system.

    The returned trajectory carries the momenta, the controls (equal to
    h1..h4) and drift diagnostics; an advisory flag is raised in the
    diagnostics when Hamiltonian drift per unit time exceeds 1e-6.
    """
    n, h = _grid(T, dt)
    y0 = np.concatenate([q0.array, h0.array])
    path = _rk4_path(y0, n, h)
    times = np.linspace(0.0, T, n + 1)
    states = path[:, :7]
    momenta = path[:, 7:]
    energies = 0.5 * np.sum(momenta[:, :4] ** 2, axis=1)
    h_drift = float(np.max(np.abs(energies - energies[0])))
    casimir = float(np.max(np.abs(momenta[:, 4:] - momenta[0, 4:])))
    rate = h_drift / T
    diag = IntegrationDiagnostics(dt=h, h_drift_max=h_drift, h_drift_rate=rate,
                                  casimir_drift=casimir,
                                  step_too_large=rate > H_DRIFT_LIMIT)
    return Trajectory(ADAPTED, times, states, momenta, momenta[:, :4], diag)


def integrate_extremal_batch(h0s: np.ndarray, q0s: np.ndarray, T: float,
                             dt: float = 1e-3) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized sweep: B initial conditions integrated side by side.

    Returns (times, states, momenta) with shapes (n+1,), (B, n+1, 7),
    (B, n+1, 7).
    """
    h0s = np.atleast_2d(np.asarray(h0s, dtype=float))
    q0s = np.atleast_2d(np.asarray(q0s, dtype=float))
    if q0s.shape[0] == 1 and h0s.shape[0] > 1:
        q0s = np.repeat(q0s, h0s.shape[0], axis=0)
    n, h = _grid(T, dt)
    y0 = np.concatenate([q0s, h0s], axis=1)
    path = _rk4_path(y0, n, h)  # (n+1, B, 14)
    times = np.linspace(0.0, T, n + 1)
    path = np.swapaxes(path, 0, 1)
    return times, path[:, :, :7], path[:, :, 7:]


def closed_form_trajectory(c: SolutionConstants, T: float, dt: float = 1e-3,
                           quad_tol: float = 1e-10) -> Trajectory:
    """Closed-form solution sampled on a uniform grid (y's by quadrature)."""
    n, h = _grid(T, dt)
    times = np.linspace(0.0, T, n + 1)
    states = np.empty((n + 1, 7))
    momenta = np.empty((n + 1, 7))
    dys = _y_integrands(c)
    yacc = [0.0, 0.0, 0.0]
    for k, t in enumerate(times):
        states[k, :4] = _closed_form_flat(c, t)
        if k > 0:
            for i, f in enumerate(dys):
                yacc[i] += _adaptive_simpson(f, times[k - 1], t, quad_tol)
        states[k, 4:] = yacc
        momenta[k] = closed_form_fibre(c, t).array
    return Trajectory(ADAPTED, times, states, momenta, momenta[:, :4], None)


# ---------------------------------------------------------------------------
# worked examples

_SQRT10 = math.sqrt(10.0)
_SQRT30 = math.sqrt(30.0)

EXAMPLE_CONSTANTS = {
    1: SolutionConstants(C11=0.7, C13=0.5, C14=0.5, C15=0.1),
    2: SolutionConstants(C5=1.0, C11=0.5, C12=-0.5, C13=0.0, C14=0.5, C15=0.5),
    3: SolutionConstants(C5=_S3 / 3.0, C6=-_S3 / 3.0, C7=-_S3 / 3.0,
                         C11=-_SQRT10 / 4.0, C12=0.0,
                         C13=0.5, C14=0.25, C15=0.25),
}


def example_constants(n: int) -> SolutionConstants:
    if n not in EXAMPLE_CONSTANTS:
        raise ValueError("example index must be 1, 2 or 3")
    return EXAMPLE_CONSTANTS[n]


def example_momenta(n: int) -> FibreState:
    """Initial momenta of worked example n (all are arc-length normalized)."""
    return example_constants(n).initial_fibre_state()


def example_solution(n: int, t: float) -> Configuration:
    """The worked example solutions in original-chart coordinates."""
    if n == 1:
        return Configuration.original(
            x=0.7 * t,
            y=(7.0 * _S3 / 600.0 - 49.0 / 800.0) * t * t,
            theta=21.0 * t * t / 1600.0 - 21.0 * t / 80.0,
            phi=-49.0 * t * t / 200.0 + 21.0 * t / 10.0,
            l1=0.5 * t, l2=0.5 * t, l3=0.1 * t,
        )
    if n == 2:
        s, co = math.sin(t), math.cos(t)
        return Configuration.original(
            x=0.5 * s + 0.5 * co - 0.5,
            y=-_S3 / 48.0 * (_S3 * (s - 1.0) * (co - 1.0) + co * co
                             + t * co + (t - 2.0) * s + t - 1.0),
            theta=(-co * co / 64.0 + (t - 10.0) / 64.0 * co
                   + (t - 12.0) / 64.0 * s - t / 64.0 + 11.0 / 64.0),
            phi=(co * co / 32.0 + (36.0 - 11.0 * t) / 32.0 * co
                 + (58.0 - 11.0 * t) / 32.0 * s + t / 32.0 - 37.0 / 32.0),
            l1=0.5 * s - 0.5 * co + 0.5,
            l2=0.5 * t, l3=0.5 * t,
        )
    if n == 3:
        s, co = math.sin(t), math.cos(t)
        return Configuration.original(
            x=-_SQRT10 / 4.0 * s,
            y=(_SQRT30 / 192.0 * (1.0 - t * s - co) + 5.0 / 64.0 * co * co
               - 5.0 / 96.0 * s * co - 5.0 * t / 96.0 + 5.0 / 48.0 * s - 5.0 / 64.0),
            theta=-3.0 * _SQRT10 / 256.0 * ((t - 8.0) * s + co - 1.0),
            phi=13.0 * _S3 / 384.0 * (
                ((t - 96.0 / 13.0) * s + co - 1.0) * _SQRT30
                + (100.0 / 13.0 - 50.0 / 13.0 * co) * s - 50.0 / 13.0 * t),
            l1=_SQRT30 / 12.0 * (co - 1.0) + 0.5 * t,
            l2=_SQRT30 / 12.0 * (1.0 - co) + 0.25 * t,
            l3=_SQRT30 / 12.0 * (1.0 - co) + 0.25 * t,
        )
    raise ValueError("example index must be 1, 2 or 3")


# ---------------------------------------------------------------------------
# bracket motions


@dataclass(frozen=True)
class BracketMotionParams:
    """Out-of-phase periodic inputs on the pair (first field, partner field)."""

    amplitude: float = 0.4
    omega: float = 2.0 * math.pi / 50.0
    partner: int = 2
    cycles: int = 1
    steps_per_cycle: int = 2000

    def __post_init__(self):
        if self.amplitude <= 0.0 or self.omega <= 0.0:
            raise ValueError("amplitude and omega must be positive")
        if self.partner not in (2, 3, 4):
            raise ValueError("partner index must be 2, 3 or 4")
        if self.cycles < 1:
            raise ValueError("cycle count must be at least 1")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    def controls(self, t: float) -> np.ndarray:
        u = np.zeros(4)
        u[0] = -self.amplitude * self.omega * math.sin(self.omega * t)
        u[self.partner - 1] = self.amplitude * self.omega * math.cos(self.omega * t)
        return u


def bracket_motion(params: BracketMotionParams, system: str = "nilpotent",
                   q_start=None) -> Trajectory:
    """Integrate the bracket gait on either the nilpotent or original system.

    One cycle of u1 = -A w sin(wt), u_i = A w cos(wt) produces a net
    displacement along the bracket of the driven pair; on the nilpotent
    system the flat coordinates return to their start exactly and the only
    net motion is pi*A^2 along the corresponding y-direction.
    """
    if system == "nilpotent":
        if q_start is None:
            q_start = to_adapted(reference_configuration())
        state = q_start.array.copy()

        def rhs(t, q):
            u = params.controls(t)
            F = nilpotent_frame_matrix(q)
            return u @ F

        chart = ADAPTED
    elif system == "original":
        if q_start is None:
            q_start = reference_configuration()
        if q_start.chart != ORIGINAL:
            raise ChartMismatch("original-system gait needs an original-chart start")
        state = q_start.array.copy()

        def rhs(t, q):
            u = params.controls(t)
            F = horizontal_frame(Configuration(ORIGINAL, tuple(q)))
            return u @ F

        chart = ORIGINAL
    else:
        raise ValueError("system must be 'nilpotent' or 'original'")

    n = params.steps_per_cycle * params.cycles
    h = params.period / params.steps_per_cycle
    times = np.linspace(0.0, params.cycles * params.period, n + 1)
    states = np.empty((n + 1, 7))
    controls = np.empty((n + 1, 4))
    states[0] = state
    controls[0] = params.controls(0.0)
    y = state
    for k in range(n):
        t = times[k]
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if chart == ORIGINAL and y[5] * states[0, 5] <= 0.0:
            # the revolute leg length crossed zero between samples; the
            # frame is singular somewhere inside this step
            raise SingularConfiguration(
                f"l2 crossed zero near t = {times[k + 1]:.6g} during the gait")
        states[k + 1] = y
        controls[k + 1] = params.controls(times[k + 1])
    return Trajectory(chart, times, states, None, controls, None)


def bracket_displacement(traj: Trajectory) -> np.ndarray:
    """Net adapted-chart displacement of a gait trajectory."""
    if traj.chart == ADAPTED:
        return traj.displacement()
    first = to_adapted(Configuration(ORIGINAL, tuple(traj.states[0]))).array
    last = to_adapted(Configuration(ORIGINAL, tuple(traj.states[-1]))).array
    return last - first


# ---------------------------------------------------------------------------
# CSV / JSON plumbing

_BASE_COLUMNS = ("t", "x", "y", "theta", "phi", "l1", "l2", "l3")
_MOMENTA_COLUMNS = tuple(f"h{i}" for i in range(1, 8))
_CONTROL_COLUMNS = tuple(f"u{i}" for i in range(1, 5))


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """Write a trajectory in original-chart columns at 17 significant digits.

    Adapted-chart trajectories are converted sample-by-sample first; the
    floats written are exactly the floats a reader gets back.
    """
    traj = traj.to_original()
    header = list(_BASE_COLUMNS)
    if traj.momenta is not None:
        header += list(_MOMENTA_COLUMNS)
    if traj.controls is not None:
        header += list(_CONTROL_COLUMNS)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i, t in enumerate(traj.times):
            row = [_fmt(t)] + [_fmt(v) for v in traj.states[i]]
            if traj.momenta is not None:
                row += [_fmt(v) for v in traj.momenta[i]]
            if traj.controls is not None:
                row += [_fmt(v) for v in traj.controls[i]]
            writer.writerow(row)


def read_trajectory_csv(path) -> Trajectory:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    if tuple(header[:8]) != _BASE_COLUMNS:
        raise ValueError(f"unexpected trajectory header {header[:8]}")
    data = np.array(rows)
    times = data[:, 0]
    states = data[:, 1:8]
    col = 8
    momenta = None
    controls = None
    if len(header) > col and header[col] == "h1":
        momenta = data[:, col:col + 7]
        col += 7
    if len(header) > col and header[col] == "u1":
        controls = data[:, col:col + 4]
    return Trajectory(ORIGINAL, times, states, momenta, controls, None)


def load_solution_constants(path) -> SolutionConstants:
    with open(path) as fh:
        return SolutionConstants.from_json(json.load(fh))


def save_solution_constants(c: SolutionConstants, path) -> None:
    with open(path, "w") as fh:
        json.dump(c.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
