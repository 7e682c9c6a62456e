#!/usr/bin/env python3
"""Two-point boundary experiment: shoot initial momenta to reach a target.

Newton iteration on the endpoint map h0 -> q(T) of the Hamiltonian system,
with a finite-difference Jacobian.  Works for targets in a neighbourhood
of the straight-line endpoint; this is a demonstration of local
controllability through normal extremals, not a general solver.
"""
import argparse
import json
import pathlib

import numpy as np

from trident47 import nilpotent, pmp
from trident47.pmp import FibreState


def endpoint(h0: np.ndarray, T: float, dt: float) -> np.ndarray:
    traj = pmp.integrate_extremal(FibreState.from_array(h0),
                                  nilpotent.group_identity(), T, dt)
    return traj.states[-1]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--target", type=float, nargs=7,
                    default=[0.15, 0.25, 0.1, -0.1, 0.2, 0.05, -0.08],
                    metavar=("X", "L1", "L2", "L3", "Y1", "Y2", "Y3"))
    ap.add_argument("--T", type=float, default=1.0)
    ap.add_argument("--dt", type=float, default=2e-3)
    ap.add_argument("--max-iter", type=int, default=25)
    ap.add_argument("--tol", type=float, default=1e-9)
    ap.add_argument("--outdir", default="out")
    args = ap.parse_args()

    target = np.array(args.target)
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    # straight-line warm start: flat coordinates integrate the momenta directly
    h = np.zeros(7)
    h[:4] = target[:4] / args.T

    # Levenberg-Marquardt on the endpoint residual; the Jacobian is poorly
    # scaled in the bracket-momenta directions near h5 = h6 = h7 = 0
    fd = 1e-6
    lam = 1e-3
    history = []
    res = endpoint(h, args.T, args.dt) - target
    norm = float(np.linalg.norm(res))
    for it in range(args.max_iter):
        history.append(norm)
        print(f"iter {it:2d}: |endpoint - target| = {norm:.3e}")
        if norm < args.tol:
            break
        J = np.empty((7, 7))
        for j in range(7):
            dh = np.zeros(7)
            dh[j] = fd
            J[:, j] = (endpoint(h + dh, args.T, args.dt)
                       - endpoint(h - dh, args.T, args.dt)) / (2.0 * fd)
        improved = False
        for _ in range(12):
            step = np.linalg.solve(J.T @ J + lam * np.eye(7), J.T @ res)
            trial = h - step
            trial_res = endpoint(trial, args.T, args.dt) - target
            trial_norm = float(np.linalg.norm(trial_res))
            if trial_norm < norm:
                h, res, norm = trial, trial_res, trial_norm
                lam = max(lam / 4.0, 1e-12)
                improved = True
                break
            lam *= 8.0
        if not improved:
            print("no descent direction found; stopping")
            break

    solved = FibreState.from_array(h)
    traj = pmp.integrate_extremal(solved, nilpotent.group_identity(), args.T, args.dt)
    pmp.write_trajectory_csv(traj, outdir / "shooting_trajectory.csv")
    report = {
        "target": [float(v) for v in target],
        "momenta": [float(v) for v in h],
        "endpoint": [float(v) for v in traj.states[-1]],
        "residual_norm": history[-1],
        "iterations": len(history),
        "residual_history": history,
        "energy": pmp.hamiltonian(solved),
    }
    with open(outdir / "shooting_report.json", "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
    print(f"momenta: {np.array2string(h, precision=6)}")
    print(f"wrote {outdir}/shooting_trajectory.csv and shooting_report.json")


if __name__ == "__main__":
    main()
