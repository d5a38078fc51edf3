"""Fiber motion plans and their composition with reaction mechanisms.

``fiber_plan`` is a concrete planning section for the two-disk model: with
the obstacle frozen, it moves the ego center along the shortest path that
avoids the open safety disk (straight segment, or tangent-arc-tangent
around the disk). Its branch structure (straight / CCW detour / CW detour /
degenerate tie) is the planner's discontinuity record.

``extended_plan`` replans under obstacle motion known in advance by lifting
each intermediate plan point along the obstacle path; ``moving_target_plan``
chases a target that is itself reacting. Both compose the plain section with
``integrate_lift`` and inherit the section's branch structure.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import BasePointMismatch, FiberMismatch, InadmissibleConfig
from .geometry import Vec2
from .bundle import ADMISSIBILITY_TOL, SAFE_DISTANCE, Config, boundary_distance, project
from .lifting import LiftOutcome, ReactionMechanism, SampledPath, integrate_lift

# base points closer than this are considered the same fiber
FIBER_TOL = 1e-9

# detour arcs run at radius 2 + PLAN_CLEARANCE rather than exactly on the
# boundary: a plan hugging the constraint exactly sits at the collision
# threshold of every subsequent lift and gets killed by integrator-level
# noise. The pad changes path lengths by well under any stated tolerance.
PLAN_CLEARANCE = 1e-6

_TWO_PI = 2.0 * math.pi


class Piece(Enum):
    """Which continuity branch of the planning section produced a plan."""

    STRAIGHT = "Straight"
    DETOUR_CCW = "DetourCCW"
    DETOUR_CW = "DetourCW"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class Reparam:
    """A monotone time warp on [0, 1] fixing both endpoints."""

    rule: Callable[[float], float] = field(repr=False)
    name: str = "custom"

    def __post_init__(self):
        if abs(self.rule(0.0)) > 1e-12 or abs(self.rule(1.0) - 1.0) > 1e-12:
            raise ValueError("reparametrization must fix 0 and 1")
        grid = [self.rule(i / 100.0) for i in range(101)]
        if any(b - a < -1e-12 for a, b in zip(grid, grid[1:])):
            raise ValueError("reparametrization must be non-decreasing")

    def __call__(self, t: float) -> float:
        return self.rule(t)

    @staticmethod
    def identity() -> "Reparam":
        return Reparam(rule=lambda t: t, name="identity")

    @staticmethod
    def smoothstep() -> "Reparam":
        return Reparam(rule=lambda t: t * t * (3.0 - 2.0 * t), name="smoothstep")


def _mod_2pi(x: float) -> float:
    d = math.fmod(x, _TWO_PI)
    if d < 0.0:
        d += _TWO_PI
    # guard against -eps wrapping to a spurious full loop
    if d > _TWO_PI - 1e-9:
        d = 0.0
    return d


@dataclass(frozen=True)
class _Seg:
    p0: Vec2
    p1: Vec2
    length: float

    def point(self, s: float) -> Vec2:
        u = s / self.length
        return Vec2(
            self.p0.x + u * (self.p1.x - self.p0.x),
            self.p0.y + u * (self.p1.y - self.p0.y),
        )


@dataclass(frozen=True)
class _Arc:
    center: Vec2
    radius: float
    phi0: float
    dphi: float  # signed: positive CCW
    length: float

    def point(self, s: float) -> Vec2:
        phi = self.phi0 + self.dphi * (s / self.length)
        return Vec2(
            self.center.x + self.radius * math.cos(phi),
            self.center.y + self.radius * math.sin(phi),
        )


@dataclass(frozen=True)
class FiberPlan:
    """A constant-speed motion of the ego inside one fiber.

    ``point_at`` evaluates the exact construction (segments and circular
    arc), so intermediate configs queried by the composition operations are
    admissible to machine precision; ``path`` is a sampled materialization.
    """

    start: Config
    goal: Config
    piece: Piece
    length: float
    _pieces: tuple = field(repr=False)
    num_samples: int = 501

    def point_at(self, u: float) -> Vec2:
        """Ego position at normalized time u in [0, 1]; endpoints exact."""
        if u <= 0.0:
            return self.start.cM
        if u >= 1.0 or self.length == 0.0:
            return self.goal.cM
        s = u * self.length
        for piece in self._pieces:
            if s <= piece.length or piece is self._pieces[-1]:
                return piece.point(min(s, piece.length))
            s -= piece.length
        return self.goal.cM

    def config_at(self, u: float) -> Config:
        return Config(self.point_at(u), self.start.cN)

    @cached_property
    def path(self) -> SampledPath:
        n = self.num_samples
        o = self.start.cN
        pts = np.empty((n, 4))
        for i in range(n):
            p = self.point_at(i / (n - 1))
            pts[i] = (p.x, p.y, o.x, o.y)
        return SampledPath(np.linspace(0.0, 1.0, n), pts)


def fiber_plan(e: Config, ePrime: Config, num_samples: int = 501) -> FiberPlan:
    """Shortest ego path between two configs over the same base point.

    Straight when the segment misses the open safety disk around the
    obstacle; otherwise tangent segment, boundary arc on the shorter side,
    tangent segment. Ties between the two sides are reported as the
    degenerate branch and broken toward the counterclockwise arc.
    """
    if e.cN.distance_to(ePrime.cN) > FIBER_TOL:
        raise FiberMismatch(f"base points {e.cN} and {ePrime.cN} differ")
    if boundary_distance(e) < -ADMISSIBILITY_TOL:
        raise InadmissibleConfig(f"start config violates the constraint: {e}")
    if boundary_distance(ePrime) < -ADMISSIBILITY_TOL:
        raise InadmissibleConfig(f"goal config violates the constraint: {ePrime}")

    o = e.cN
    a, b = e.cM, ePrime.cM

    ab = b - a
    seg_len = ab.norm()
    if seg_len == 0.0:
        return FiberPlan(e, ePrime, Piece.STRAIGHT, 0.0, (_Seg(a, b, 1.0),), num_samples)

    # closest approach of the segment to the obstacle center
    t_hat = max(0.0, min(1.0, (o - a).dot(ab) / (seg_len * seg_len)))
    closest = Vec2(a.x + t_hat * ab.x, a.y + t_hat * ab.y)
    if closest.distance_to(o) >= SAFE_DISTANCE - 1e-9:
        return FiberPlan(e, ePrime, Piece.STRAIGHT, seg_len, (_Seg(a, b, seg_len),), num_samples)

    R = SAFE_DISTANCE + PLAN_CLEARANCE
    ra, rb = a - o, b - o
    da, db = max(ra.norm(), R), max(rb.norm(), R)
    th_a, th_b = ra.angle(), rb.angle()
    half_a = math.acos(min(1.0, R / da))
    half_b = math.acos(min(1.0, R / db))
    tan_a = math.sqrt(max(da * da - R * R, 0.0))
    tan_b = math.sqrt(max(db * db - R * R, 0.0))

    # CCW traversal departs at th_a + half_a and arrives at th_b - half_b;
    # CW mirrors both signs
    d_ccw = _mod_2pi((th_b - half_b) - (th_a + half_a))
    d_cw = _mod_2pi((th_a - half_a) - (th_b + half_b))
    len_ccw = tan_a + tan_b + R * d_ccw
    len_cw = tan_a + tan_b + R * d_cw

    if abs(len_ccw - len_cw) <= 1e-9:
        piece, ccw = Piece.DEGENERATE, True
    elif len_ccw < len_cw:
        piece, ccw = Piece.DETOUR_CCW, True
    else:
        piece, ccw = Piece.DETOUR_CW, False

    if ccw:
        phi1, dphi, arc_len = th_a + half_a, d_ccw, R * d_ccw
    else:
        phi1, dphi, arc_len = th_a - half_a, -d_cw, R * d_cw
    t1 = Vec2(o.x + R * math.cos(phi1), o.y + R * math.sin(phi1))
    phi2 = phi1 + dphi
    t2 = Vec2(o.x + R * math.cos(phi2), o.y + R * math.sin(phi2))

    pieces = []
    if tan_a > 1e-15:
        pieces.append(_Seg(a, t1, tan_a))
    if arc_len > 1e-15:
        pieces.append(_Arc(o, R, phi1, dphi, arc_len))
    if tan_b > 1e-15:
        pieces.append(_Seg(t2, b, tan_b))
    if not pieces:
        pieces.append(_Seg(a, b, max(seg_len, 1e-300)))
    total = tan_a + tan_b + arc_len
    return FiberPlan(e, ePrime, piece, total, tuple(pieces), num_samples)


def _node_indices(n: int, stride: int) -> list[int]:
    idxs = list(range(0, n, max(1, stride)))
    if idxs[-1] != n - 1:
        idxs.append(n - 1)
    return idxs


def extended_plan(
    gamma: SampledPath,
    e: Config,
    ePrime: Config,
    L: ReactionMechanism,
    phi: Optional[Reparam] = None,
    stride: int = 1,
    step: Optional[float] = None,
) -> LiftOutcome:
    """Plan from e toward ePrime while the obstacle moves along gamma.

    At each output node t_k the value is the lift, along gamma up to t_k, of
    the plain fiber plan evaluated at warped time phi(t_k). The result starts
    at e exactly, stays over gamma at every node, and ends at the lift of
    ePrime along the whole of gamma. Each node requires its own lift from a
    different start point, so cost is quadratic in the grid size; ``stride``
    subsamples the output nodes (endpoints always kept).

    A collision in any per-node lift truncates the output: the partial path
    is returned with ``completed=False`` and that lift's collision time.
    """
    if phi is None:
        phi = Reparam.identity()
    t0, t1 = gamma.t0, gamma.t1
    b0 = gamma.base_point_at(t0)
    if project(e).distance_to(b0) > FIBER_TOL or project(ePrime).distance_to(b0) > FIBER_TOL:
        raise BasePointMismatch("e and ePrime must live over gamma's start point")
    plan = fiber_plan(e, ePrime)
    if step is None:
        step = (t1 - t0) / (gamma.n - 1)

    idxs = _node_indices(gamma.n, stride)
    times_out: list[float] = []
    rows: list[tuple[float, float, float, float]] = []
    for k in idxs:
        tk = float(gamma.times[k])
        if k == 0:
            times_out.append(tk)
            rows.append((e.cM.x, e.cM.y, b0.x, b0.y))
            continue
        tau = (tk - t0) / (t1 - t0)
        a_k = Config(plan.point_at(phi(tau)), e.cN)
        lifted = integrate_lift(L, a_k, gamma, step=step, t_end=tk)
        if not lifted.completed:
            if len(times_out) >= 2:
                partial = SampledPath(np.array(times_out), np.array(rows))
                return LiftOutcome(partial, completed=False, collision_time=lifted.collision_time)
            return LiftOutcome(lifted.path, completed=False, collision_time=lifted.collision_time)
        times_out.append(tk)
        rows.append(tuple(lifted.path.points[-1]))
    return LiftOutcome(SampledPath(np.array(times_out), np.array(rows)), completed=True)


def moving_target_plan(
    e: Config,
    nu: SampledPath,
    L: ReactionMechanism,
    step: Optional[float] = None,
    base_velocity_fn: Optional[Callable[[float], Vec2]] = None,
) -> LiftOutcome:
    """Chase a moving target path nu (compound, d == 4) from the state e.

    The obstacle motion is read off nu itself. At each node the ego's lifted
    position (one fixed-step lift of e along the whole obstacle path, read at
    that node) is replanned toward the target's current config, and the plan
    is sampled at the current normalized time. Starts at e and ends at nu's
    final config exactly; obstacle coordinates match nu's at every node.
    """
    if nu.dim != 4:
        raise ValueError("nu must be a compound (d == 4) path")
    gamma = nu.base_path()
    if base_velocity_fn is not None:
        gamma = SampledPath(gamma.times, gamma.points, base_velocity_fn)
    t0, t1 = nu.t0, nu.t1
    b0 = gamma.base_point_at(t0)
    if project(e).distance_to(b0) > FIBER_TOL:
        raise BasePointMismatch("e must live over the target path's start point")
    if step is None:
        step = (t1 - t0) / (nu.n - 1)

    lifted = integrate_lift(L, e, gamma, step=step)
    horizon = lifted.path.t1
    times_out: list[float] = []
    rows: list[tuple[float, float, float, float]] = []
    for k in range(nu.n):
        tk = float(nu.times[k])
        if tk > horizon + 1e-12:
            break
        a_k = lifted.config_at(min(tk, horizon))
        b_k = nu.config_at(tk)
        plan_k = fiber_plan(a_k, b_k)
        tau = (tk - t0) / (t1 - t0)
        p = plan_k.point_at(tau)
        times_out.append(tk)
        rows.append((p.x, p.y, b_k.cN.x, b_k.cN.y))
    if not lifted.completed and len(times_out) < 2:
        return LiftOutcome(lifted.path, completed=False, collision_time=lifted.collision_time)
    path = SampledPath(np.array(times_out), np.array(rows))
    return LiftOutcome(path, completed=lifted.completed, collision_time=lifted.collision_time)


def continuity_pieces(scenarios: Iterable[tuple[Config, Config]]) -> Counter:
    """Tabulate which planner branch each (start, goal) pair takes.

    The extension constructions reuse the underlying plan's branch, so this
    histogram is also their branch histogram: composing with a lift never
    adds continuity pieces.
    """
    counts: Counter = Counter()
    for e, ePrime in scenarios:
        counts[fiber_plan(e, ePrime).piece] += 1
    return counts
