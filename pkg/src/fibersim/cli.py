"""Command-line front-end: simulate, analyze, plan, serve.

Exit codes encode the outcome class so shell harnesses can assert safety
properties: 0 = run completed, 2 = collision event, 1 = bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .errors import FibersimError, ScenarioError
from .geometry import Vec2
from .bundle import ADMISSIBILITY_TOL, Config, boundary_distance, project
from .lifting import integrate_lift
from .planner import extended_plan, fiber_plan
from . import analysis
from .scenario import TrajectoryRecord, load_scenario


def _setup_logging():
    level = os.environ.get("FIBERSIM_LOG", "off").lower()
    if level == "debug":
        logging.basicConfig(level=logging.DEBUG)
    elif level == "info":
        logging.basicConfig(level=logging.INFO)
    else:
        logging.disable(logging.CRITICAL)


def _parse_pair(text: str, name: str) -> Vec2:
    try:
        x, y = (float(c) for c in text.split(","))
    except ValueError:
        raise ScenarioError(f"{name}: expected 'x,y', got {text!r}")
    return Vec2(x, y)


def cmd_simulate(args) -> int:
    try:
        sc = load_scenario(args.scenario)
        gamma = sc.build_obstacle_path()
        mech = sc.build_mechanism()
    except FibersimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    outcome = integrate_lift(mech, sc.initial, gamma, step=sc.step)
    record = TrajectoryRecord.from_outcome(outcome)
    with open(args.out, "w") as f:
        record.write_csv(f)
    if not outcome.completed:
        print(f"collision at t={outcome.collision_time:.6f}")
        return 2
    return 0


def cmd_analyze(args) -> int:
    try:
        cm0 = _parse_pair(args.cm0, "--cm0")
        cn0 = _parse_pair(args.cn0, "--cn0")
        geom = analysis.collision_geometry(args.alpha, args.beta, cm0, cn0)
    except FibersimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report = {
        "A": geom.A.rows(),
        "B": geom.B.rows(),
        "c0": [geom.c0.x, geom.c0.y],
        "cTilde0": None if geom.degenerate else [geom.c_tilde0.x, geom.c_tilde0.y],
        "rD": geom.r_d,
        "rDPrime": geom.r_d_prime,
        "degenerate": geom.degenerate,
        "nearDegenerate": geom.near_degenerate,
        "offset": geom.c0.norm() if geom.degenerate else None,
    }
    print(json.dumps(report))
    return 0


def cmd_plan(args) -> int:
    try:
        sc = load_scenario(args.scenario)
        gamma = sc.build_obstacle_path()
        mech = sc.build_mechanism()
        start = _parse_pair(args.start, "--start")
        goal = _parse_pair(args.goal, "--goal")
    except FibersimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    b0 = project(sc.initial)
    e = Config(start, b0)
    e_prime = Config(goal, b0)
    for name, cfg in (("start", e), ("goal", e_prime)):
        if boundary_distance(cfg) < -ADMISSIBILITY_TOL:
            print(f"error: {name} configuration overlaps the obstacle", file=sys.stderr)
            return 1
    try:
        piece = fiber_plan(e, e_prime).piece
        outcome = extended_plan(gamma, e, e_prime, mech, stride=args.stride)
    except FibersimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    record = TrajectoryRecord.from_outcome(outcome)
    pieces = [piece.value] * len(record.times)
    with open(args.out, "w") as f:
        record.write_csv(f, extra_column=("piece", pieces))
    if not outcome.completed:
        print(f"collision at t={outcome.collision_time:.6f}")
        return 2
    # endpoint residuals of the known-in-advance contract
    start_gap = outcome.path.config_at(outcome.path.t0).cM.distance_to(start)
    ref = integrate_lift(mech, e_prime, gamma, step=sc.step).final_config().cM
    end_gap = outcome.path.config_at(outcome.path.t1).cM.distance_to(ref)
    print(f"residuals: start={start_gap:.3e} end={end_gap:.3e} piece={piece.value}")
    return 0


def cmd_serve(args) -> int:
    from .server import run_serve

    run_serve(args.port, vmax=args.vmax, step=args.step)
    return 0


def main(argv=None) -> int:
    _setup_logging()
    parser = argparse.ArgumentParser(prog="fibersim")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate a scenario and write a trajectory CSV")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("analyze", help="closed-form collision geometry report")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--cm0", required=True, metavar="x,y")
    p.add_argument("--cn0", required=True, metavar="x,y")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("plan", help="plan under the scenario's obstacle motion")
    p.add_argument("--scenario", required=True)
    p.add_argument("--start", required=True, metavar="x,y")
    p.add_argument("--goal", required=True, metavar="x,y")
    p.add_argument("--out", required=True)
    p.add_argument("--stride", type=int, default=1)
    p.set_defaults(fn=cmd_plan)

    p = sub.add_parser("serve", help="realtime adversary sandbox (websocket + UI)")
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--vmax", type=float, default=5.0)
    p.add_argument("--step", type=float, default=1.0 / 60.0)
    p.set_defaults(fn=cmd_serve)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
