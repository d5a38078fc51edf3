#!/usr/bin/env python3
"""Render a trajectory CSV (both centers, safety disks at start/end)."""

import argparse

import numpy as np

try:
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit("matplotlib is required for plotting")

from fibersim.scenario import TrajectoryRecord


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv")
    ap.add_argument("--out", default=None, help="write PNG instead of showing")
    args = ap.parse_args()

    with open(args.csv) as f:
        rec = TrajectoryRecord.read_csv(f)
    P = rec.points

    fig, ax = plt.subplots(figsize=(7, 7))
    ax.plot(P[:, 0], P[:, 1], "-", color="tab:blue", label="ego M")
    ax.plot(P[:, 2], P[:, 3], "-", color="tab:red", label="obstacle N")
    th = np.linspace(0, 2 * np.pi, 100)
    for k, style in ((0, ":"), (len(P) - 1, "-")):
        ax.plot(P[k, 0] + np.cos(th), P[k, 1] + np.sin(th), style, color="tab:blue", lw=0.8)
        ax.plot(P[k, 2] + np.cos(th), P[k, 3] + np.sin(th), style, color="tab:red", lw=0.8)
    if rec.collision_time is not None:
        ax.set_title(f"collision at t = {rec.collision_time:.4f}")
    ax.set_aspect("equal")
    ax.legend()
    ax.grid(alpha=0.3)
    if args.out:
        fig.savefig(args.out, dpi=150, bbox_inches="tight")
        print(f"wrote {args.out}")
    else:
        plt.show()


if __name__ == "__main__":
    main()
