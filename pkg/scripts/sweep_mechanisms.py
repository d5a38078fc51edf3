#!/usr/bin/env python3
"""Run the built-in reaction mechanisms against one obstacle spline and
summarize how each one manages the separation distance."""

import argparse
from pathlib import Path

import numpy as np

import fibersim as fs
from fibersim.geometry import Vec2
from fibersim.scenario import TrajectoryRecord, spline_base_path

MECHS = {
    "copy": fs.mech_copy(),
    "damped": fs.mech_damped(fs.smoothstep_actuation()),
    "radial+0.5": fs.mech_radial(0.5),
    "radial-0.5": fs.mech_radial(-0.5),
    "orbit1": fs.mech_orbit(1.0),
    "copy+pushing": fs.add_form(fs.mech_copy(), [fs.pushing_form(fs.smoothstep_actuation())]),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default="sweep_out")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--step", type=float, default=1e-3)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    waypoints = np.vstack([[0.0, 0.0], rng.uniform(-2.5, 2.5, (5, 2))])
    gamma = spline_base_path(waypoints, 0.0, 1.0, n=1001)
    e0 = fs.Config(Vec2(3.0, 0.0), Vec2(0.0, 0.0))

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    print(f"{'mechanism':<14} {'outcome':<10} {'min dist':>10} {'max dist':>10} {'final dist':>11}")
    for name, mech in MECHS.items():
        outcome = fs.integrate_lift(mech, e0, gamma, step=args.step)
        rec = TrajectoryRecord.from_outcome(outcome)
        with open(out_dir / f"{name}.csv", "w") as f:
            rec.write_csv(f)
        d = rec.dist()
        status = "ok" if outcome.completed else f"hit@{outcome.collision_time:.3f}"
        print(f"{name:<14} {status:<10} {d.min():>10.4f} {d.max():>10.4f} {d[-1]:>11.4f}")
    print(f"\ntrajectories written to {out_dir}/")


if __name__ == "__main__":
    main()
