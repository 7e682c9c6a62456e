"""Batch command-line front end.

Four subcommands, each writing deterministic CSV/JSON artifacts:

* ``controllability``: rank analysis, Pfaffian signature and dynamic-pair
  regularity at a point, optionally over a random sweep of valid shapes.
* ``geodesic``: integrate a normal extremal from a constants fixture and
  cross-check the closed form; CSV trajectory plus a diagnostics sidecar.
* ``bracket-motion``: the bracket gait on the nilpotent and the original
  system, with displacement report and wheel/vertex traces.
* ``symmetry-check``: certify the symmetry algebra relations.

Exit codes: 0 pass, 1 internal/check failure, 2 invalid input or
precondition breach.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import mechanism, nilpotent, pmp, symmetry
from .errors import (ChartMismatch, DegenerateGrowth, SingularConfiguration,
                     NotASymmetry, TridentError, ZeroHorizontalMomentum)
from .fields import ADAPTED, ORIGINAL
from .mechanism import Configuration

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BAD_INPUT = 2


@dataclass(frozen=True)
class RunSpec:
    """Echo of the effective options of a run, embedded in every report."""

    command: str
    point: tuple[float, ...] | None = None
    chart: str | None = None
    constants: str | None = None
    out: str | None = None
    dt: float | None = None
    T: float | None = None
    tol_rank: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.T is not None and self.T <= 0:
            raise ValueError("T must be positive")

    def to_json(self) -> dict:
        d = {k: v for k, v in self.__dict__.items() if v is not None}
        if "point" in d:
            d["point"] = list(d["point"])
        return d


def _parse_point(text: str) -> tuple[float, ...]:
    vals = tuple(float(v) for v in text.split(","))
    if len(vals) != 7:
        raise ValueError("--point needs 7 comma-separated numbers")
    return vals


def _write_json(path, obj) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path is None:
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _default_point() -> tuple[float, ...]:
    return mechanism.reference_configuration().values


def cmd_controllability(args) -> int:
    spec = RunSpec(command="controllability", point=args.point, chart=args.chart,
                   out=args.out, tol_rank=args.tol_rank, seed=args.seed)
    q = Configuration(args.chart, args.point)
    if q.chart == ADAPTED:
        q = nilpotent.from_adapted(nilpotent.AdaptedPoint.from_array(q.array))
    try:
        res = mechanism.controllability(q, rank_tol=args.tol_rank)
        sig = mechanism.pfaffian_signature(q, eig_tol=args.tol_rank)
        pairs = {f"f={f:g}": list(_pair_tuple(mechanism.check_dynamic_pair(q, f)))
                 for f in args.dynamic_f}
    except (SingularConfiguration, DegenerateGrowth) as exc:
        _write_json(args.out, {"error": str(exc), "spec": spec.to_json()})
        return EXIT_BAD_INPUT

    report = {
        "growth": list(res.growth),
        "detG_nonzero": bool(res.growth == (4, 7)),
        "det": res.det,
        "signature": list(sig.as_tuple()),
        "dynamic_pair": pairs,
        "gbar": mechanism.serialize_matrix(res.gbar),
        "point": list(q.values),
        "spec": spec.to_json(),
    }
    ok = res.growth == (4, 7)

    if args.sweep > 0:
        growths = {}
        for i in range(args.sweep):
            # deterministic per-seed substream; safe to fan out over workers
            rng = np.random.default_rng([args.seed, i])
            legs = rng.uniform(0.5, 2.0, 3)
            phi = rng.uniform(-0.3, 0.3)
            qs = Configuration.original(0.0, 0.0, math.pi / 2.0, phi, *legs)
            g = mechanism.controllability(qs, rank_tol=args.tol_rank).growth
            growths[str(list(g))] = growths.get(str(list(g)), 0) + 1
        report["sweep"] = {"samples": args.sweep, "growth_counts": growths}
        ok = ok and set(growths) == {"[4, 7]"}

    _write_json(args.out, report)
    return EXIT_OK if ok else EXIT_FAIL


def _pair_tuple(res: mechanism.DynamicPairResult):
    return (res.rank_v0, res.rank_v1, res.transversal)


def cmd_geodesic(args) -> int:
    spec = RunSpec(command="geodesic", point=args.point, chart=args.chart,
                   constants=args.constants, out=args.out, dt=args.dt, T=args.T,
                   seed=args.seed)
    constants = pmp.load_solution_constants(args.constants)
    h0 = constants.initial_fibre_state()
    if h0.horizontal_norm() == 0.0:
        raise ZeroHorizontalMomentum("the fixture has zero horizontal momentum")

    traj = pmp.integrate_extremal(h0, nilpotent.group_identity(), args.T, args.dt)

    # cross-check the closed form on a decimated grid
    check_every = max(1, len(traj) // 200)
    idx = np.arange(0, len(traj), check_every)
    worst = 0.0
    for i in idx:
        ref = pmp.closed_form_base(constants, float(traj.times[i]))
        worst = max(worst, float(np.max(np.abs(ref.array - traj.states[i]))))

    if args.point is not None:
        start = nilpotent.AdaptedPoint.from_array(args.point)
        if args.chart == ORIGINAL:
            start = nilpotent.to_adapted(Configuration(ORIGINAL, args.point))
        states = np.stack([
            nilpotent.group_mul(start, nilpotent.AdaptedPoint.from_array(q)).array
            for q in traj.states
        ])
        traj = pmp.Trajectory(ADAPTED, traj.times, states, traj.momenta,
                              traj.controls, traj.diagnostics)

    pmp.write_trajectory_csv(traj, args.out)
    sidecar = {
        "closed_form_max_deviation": worst,
        "closed_form_branch": "oscillating" if constants.K > 0 else "constant-controls",
        "constants_consistency_residual": constants.consistency_residual(),
        "diagnostics": traj.diagnostics.to_json(),
        "spec": spec.to_json(),
    }
    _write_json(args.out + ".diagnostics.json", sidecar)
    return EXIT_OK


def cmd_bracket_motion(args) -> int:
    spec = RunSpec(command="bracket-motion", out=args.out, seed=args.seed)
    params = pmp.BracketMotionParams(amplitude=args.A, omega=args.omega,
                                     partner=args.partner, cycles=args.cycles)
    try:
        nil = pmp.bracket_motion(params, "nilpotent")
        orig = pmp.bracket_motion(params, "original")
    except SingularConfiguration as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    pmp.write_trajectory_csv(nil, f"{args.out}_nilpotent.csv")
    pmp.write_trajectory_csv(orig, f"{args.out}_original.csv")
    _write_trace_csv(nil.to_original(), f"{args.out}_nilpotent_trace.csv")
    _write_trace_csv(orig, f"{args.out}_original_trace.csv")

    names = ("dx", "dl1", "dl2", "dl3", "dy1", "dy2", "dy3")
    d_nil = pmp.bracket_displacement(nil)
    d_orig = pmp.bracket_displacement(orig)
    report = {
        "params": {"A": params.amplitude, "omega": params.omega,
                   "partner": params.partner, "cycles": params.cycles},
        "area_rule_dy": math.pi * params.amplitude**2 * params.cycles,
        "nilpotent": dict(zip(names, map(float, d_nil))),
        "original": dict(zip(names, map(float, d_orig))),
        "difference_norm": float(np.linalg.norm(d_nil - d_orig)),
        "spec": spec.to_json(),
    }
    _write_json(f"{args.out}_displacement.json", report)
    return EXIT_OK


def _write_trace_csv(traj, path) -> None:
    """Planar traces of the block centre, vertices and wheels."""
    import csv as _csv

    header = ["t", "cx", "cy"]
    for i in (1, 2, 3):
        header += [f"v{i}x", f"v{i}y"]
    for i in (1, 2, 3):
        header += [f"w{i}x", f"w{i}y"]
    with open(path, "w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(header)
        for t, state in zip(traj.times, traj.states):
            q = Configuration(ORIGINAL, tuple(state))
            verts = mechanism.root_vertices(q)
            wheels = mechanism.wheel_positions(q)
            row = [t, state[0], state[1]]
            row += [v for xy in verts for v in xy]
            row += [v for xy in wheels for v in xy]
            writer.writerow([format(float(v), ".17g") for v in row])


def cmd_symmetry_check(args) -> int:
    spec = RunSpec(command="symmetry-check", out=args.out, seed=args.seed)
    report: dict = {"spec": spec.to_json()}
    ok = True

    table = symmetry.so3_structure()
    report["so3_structure"] = {f"[v{i},v{j}]": list(c) for (i, j), c in table.items()}
    expected = {(1, 2): (0.0, 0.0, -1.0), (1, 3): (0.0, 1.0, 0.0), (2, 3): (-1.0, 0.0, 0.0)}
    ok &= table == expected

    vs = list(symmetry.v_fields())
    if args.perturb != 0.0:
        from .fields import coordinate_field
        bent = symmetry.SymmetryField(
            "v1(perturbed)",
            vs[0].field + args.perturb * coordinate_field(ADAPTED, 2))
        vs[0] = bent

    conditions = {}
    for v in vs:
        try:
            rep = symmetry.check_symmetry_conditions(v)
            conditions[v.name] = {
                "commutes_with_n1": rep.commutes_with_n1,
                "vertical_matrix": [list(r) for r in rep.vertical_matrix],
                "metric_preserved": rep.metric_preserved,
            }
        except NotASymmetry as exc:
            residual_norm = None
            if exc.residual is not None:
                probe = np.ones(7)
                residual_norm = float(np.linalg.norm(exc.residual(probe)))
            conditions[v.name] = {"error": str(exc), "residual_norm": residual_norm}
            ok = False
    report["symmetry_conditions"] = conditions

    wrep = symmetry.w_structure_report()
    report["w_structure"] = {
        "nontrivial": {f"[{a},{b}]": list(c) for (a, b), c in wrep["nontrivial"].items()},
        "others_vanish": wrep["others_vanish"],
    }
    ok &= wrep["others_vanish"]
    report["w_transitivity_rank"] = symmetry.transitivity_rank(seed=args.seed)
    ok &= report["w_transitivity_rank"] == 7

    frame = nilpotent.extended_frame()
    inv = {}
    for name, f in zip(("N1", "N2", "N3", "N4", "N12", "N13", "N14"), frame):
        r = nilpotent.check_left_invariance(f, samples=args.samples, seed=args.seed)
        inv[name] = {"ok": r.field_ok, "max_residual": r.max_residual}
        ok &= r.field_ok
    report["left_invariance"] = inv

    fixed = {}
    for k in (0.0, 1.0, 2.0):
        pt = symmetry.fixed_point_set((1.0, 1.0, 1.0), x=0.7, k=k)
        val = symmetry.so3_combination(1.0, 1.0, 1.0).field(pt.array)
        fixed[f"k={k:g}"] = float(np.max(np.abs(val)))
        ok &= fixed[f"k={k:g}"] < 1e-12
    report["fixed_point_residuals"] = fixed

    report["all_pass"] = bool(ok)
    _write_json(args.out, report)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trident47",
                                description="Geometric control analyses of the "
                                            "(4,7) trident mechanism")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("controllability", help="rank/signature/dynamic-pair analysis")
    c.add_argument("--point", type=_parse_point, default=_default_point())
    c.add_argument("--chart", choices=(ORIGINAL, ADAPTED), default=ORIGINAL)
    c.add_argument("--tol-rank", type=float, default=mechanism.RANK_TOL)
    c.add_argument("--dynamic-f", type=lambda s: [float(v) for v in s.split(",")],
                   default=[1.0, 2.0, -0.5])
    c.add_argument("--sweep", type=int, default=0, help="random valid-shape sweep size")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", default=None, help="report path (stdout if omitted)")
    c.set_defaults(func=cmd_controllability)

    g = sub.add_parser("geodesic", help="integrate a normal extremal from a fixture")
    g.add_argument("--constants", required=True, help="SolutionConstants JSON fixture")
    g.add_argument("--T", type=float, default=2.0 * math.pi)
    g.add_argument("--dt", type=float, default=1e-3)
    g.add_argument("--point", type=_parse_point, default=None,
                   help="start point (default: adapted origin)")
    g.add_argument("--chart", choices=(ORIGINAL, ADAPTED), default=ADAPTED)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="trajectory CSV path")
    g.set_defaults(func=cmd_geodesic)

    b = sub.add_parser("bracket-motion", help="bracket gait on both systems")
    b.add_argument("--A", type=float, default=0.4)
    b.add_argument("--omega", type=float, default=2.0 * math.pi / 50.0)
    b.add_argument("--partner", type=int, choices=(2, 3, 4), default=2)
    b.add_argument("--cycles", type=int, default=1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", required=True, help="output path prefix")
    b.set_defaults(func=cmd_bracket_motion)

    s = sub.add_parser("symmetry-check", help="verify the symmetry algebra")
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--perturb", type=float, default=0.0,
                   help="self-test: add EPS * d/dl2 to v1 and watch it fail")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_symmetry_check)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ChartMismatch, ZeroHorizontalMomentum, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except TridentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
