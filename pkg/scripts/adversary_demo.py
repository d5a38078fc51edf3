#!/usr/bin/env python3
"""Forced-collision demo: for a grid of constant-coefficient mechanisms,
let the obstacle drive into the inner collision disk and compare the
simulated contact point against the closed-form prediction."""

import argparse

import fibersim as fs
from fibersim.geometry import Vec2


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--speed", type=float, default=1.0)
    ap.add_argument("--step", type=float, default=1e-3)
    args = ap.parse_args()

    cM0, cN0 = Vec2(3.0, 0.0), Vec2(0.0, 0.0)
    params = [(2.0, 0.0), (0.5, 0.0), (1.0, 1.0), (1.5, -0.8), (-1.0, 0.3)]
    print(f"{'alpha':>6} {'beta':>6} {'rD':>8} {'t_contact':>10} {'|cN-c~0| at hit':>16} {'predicted':>10}")
    for a, b in params:
        geom = fs.collision_geometry(a, b, cM0, cN0)
        path = fs.adversary_path(geom, cN0, speed=args.speed)
        out = fs.integrate_lift(fs.mech_linear_const(a, b), fs.Config(cM0, cN0), path, step=args.step)
        if out.completed:
            print(f"{a:>6.2f} {b:>6.2f}  adversary failed (unexpected)")
            continue
        hit = out.final_config()
        r_hit = hit.cN.distance_to(geom.c_tilde0)
        # contact happens when the exact region boundary is crossed:
        # |B(cN - c~0)| = 2, which for conformal B is |cN - c~0| = rD
        print(
            f"{a:>6.2f} {b:>6.2f} {geom.r_d:>8.4f} {out.collision_time:>10.4f} "
            f"{r_hit:>16.6f} {geom.r_d:>10.6f}"
        )
    print("\noffset-conserving case (alpha, beta) = (1, 0): no adversary exists")
    geom = fs.collision_geometry(1.0, 0.0, cM0, cN0)
    try:
        fs.adversary_path(geom, cN0, speed=args.speed)
    except fs.DegenerateGeometry as exc:
        print(f"  adversary_path -> DegenerateGeometry: {exc}")


if __name__ == "__main__":
    main()
