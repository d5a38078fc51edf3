"""Reaction mechanisms and the numerical path lift.

A reaction mechanism maps (config, obstacle velocity) to a compound velocity
that projects back onto the obstacle velocity; integrating it along an
obstacle path produces the ego response. The module provides:

- ``SampledPath``: time-gridded curves with piecewise-linear interpolation
  and optional analytic velocity (falls back to central differences);
- the four concrete two-disk mechanisms plus constant-coefficient linear
  ones, closed under affine combination and addition of vertical reaction
  forms;
- ``integrate_lift``: classical fixed-step RK4 on the fiber coordinate with
  the base coordinate copied exactly from the input path, stopping at the
  safety boundary via bisection in time;
- ``verify_linearity``: a randomized check distinguishing connection-type
  (linear) mechanisms from the genuinely nonlinear ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BasePointMismatch, InvalidParameters, NonFiniteState
from .geometry import Vec2, ZERO2, conformal
from .bundle import (
    ADMISSIBILITY_TOL,
    SAFE_DISTANCE,
    BaseTangent,
    Config,
    TotalTangent,
    project,
)

DEFAULT_STEP = 1e-3

# tolerance for matching an initial config against the base path start
BASE_MATCH_TOL = 1e-9

# fractional distance from a grid node below which interpolation returns the
# node value verbatim (keeps fiber consistency exact at shared grid nodes)
_NODE_SNAP = 1e-6


class SampledPath:
    """A curve on a time grid with piecewise-linear interpolation.

    ``points`` has shape (n, d): d == 2 for obstacle (base) paths holding
    (cNx, cNy), d == 4 for compound paths holding (cMx, cMy, cNx, cNy).
    The grid is uniform except possibly for a shortened final interval on
    collision-truncated lifts. ``velocity_fn``, when given, supplies the
    analytic time derivative for base paths; otherwise node velocities come
    from central differences (one-sided at the ends). ``position_fn``, when
    given, evaluates the underlying smooth curve between grid nodes (node
    values always come from the stored samples), which keeps RK4 stage
    evaluations at full accuracy instead of chord accuracy.
    """

    def __init__(
        self,
        times: Sequence[float] | np.ndarray,
        points: Sequence[Sequence[float]] | np.ndarray,
        velocity_fn: Optional[Callable[[float], Vec2]] = None,
        position_fn: Optional[Callable[[float], Vec2]] = None,
    ):
        times = np.asarray(times, dtype=float)
        points = np.asarray(points, dtype=float)
        if times.ndim != 1 or points.ndim != 2 or len(times) != len(points):
            raise ValueError("times must be (n,), points (n, d) with matching n")
        if len(times) < 2:
            raise ValueError("a path needs at least 2 samples")
        if not np.all(np.diff(times) > 0):
            raise ValueError("time grid must be strictly increasing")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(points))):
            raise ValueError("non-finite path samples")
        times.flags.writeable = False
        points.flags.writeable = False
        self.times = times
        self.points = points
        self.velocity_fn = velocity_fn
        self.position_fn = position_fn

    # -- constructors ------------------------------------------------------

    @classmethod
    def uniform(cls, t0: float, t1: float, points, velocity_fn=None) -> "SampledPath":
        points = np.asarray(points, dtype=float)
        return cls(np.linspace(t0, t1, len(points)), points, velocity_fn)

    @classmethod
    def from_function(
        cls,
        fn: Callable[[float], Vec2],
        t0: float,
        t1: float,
        n: int,
        velocity_fn: Optional[Callable[[float], Vec2]] = None,
    ) -> "SampledPath":
        times = np.linspace(t0, t1, n)
        pts = np.empty((n, 2))
        for i, t in enumerate(times):
            p = fn(float(t))
            pts[i, 0] = p.x
            pts[i, 1] = p.y
        return cls(times, pts, velocity_fn, position_fn=fn)

    @classmethod
    def constant_base(cls, point: Vec2, t0: float = 0.0, t1: float = 1.0, n: int = 2) -> "SampledPath":
        pts = np.tile([point.x, point.y], (n, 1))
        return cls(
            np.linspace(t0, t1, n),
            pts,
            velocity_fn=lambda t: ZERO2,
            position_fn=lambda t: point,
        )

    @classmethod
    def from_configs(cls, times, configs: Sequence[Config]) -> "SampledPath":
        pts = np.array([[c.cM.x, c.cM.y, c.cN.x, c.cN.y] for c in configs])
        return cls(times, pts)

    # -- basic queries -----------------------------------------------------

    @property
    def t0(self) -> float:
        return float(self.times[0])

    @property
    def t1(self) -> float:
        return float(self.times[-1])

    @property
    def n(self) -> int:
        return len(self.times)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def _bracket(self, t: float) -> tuple[int, float]:
        times = self.times
        lo, hi = float(times[0]), float(times[-1])
        span = hi - lo
        if t < lo - 1e-9 * max(1.0, span) or t > hi + 1e-9 * max(1.0, span):
            raise ValueError(f"t = {t} outside path domain [{lo}, {hi}]")
        t = min(max(t, lo), hi)
        i = int(np.searchsorted(times, t, side="right")) - 1
        i = min(max(i, 0), len(times) - 2)
        frac = (t - float(times[i])) / (float(times[i + 1]) - float(times[i]))
        return i, frac

    def value_at(self, t: float) -> np.ndarray:
        """Interpolated state; exact node values at (near-)node times."""
        i, frac = self._bracket(t)
        if frac <= _NODE_SNAP:
            return self.points[i]
        if frac >= 1.0 - _NODE_SNAP:
            return self.points[i + 1]
        return (1.0 - frac) * self.points[i] + frac * self.points[i + 1]

    @cached_property
    def _node_velocities(self) -> np.ndarray:
        t, p = self.times, self.points
        v = np.empty_like(p)
        v[0] = (p[1] - p[0]) / (t[1] - t[0])
        v[-1] = (p[-1] - p[-2]) / (t[-1] - t[-2])
        if len(t) > 2:
            v[1:-1] = (p[2:] - p[:-2]) / (t[2:] - t[:-2])[:, None]
        return v

    def velocity_at(self, t: float) -> np.ndarray:
        """Node velocities by central differences, linearly interpolated."""
        i, frac = self._bracket(t)
        v = self._node_velocities
        return (1.0 - frac) * v[i] + frac * v[i + 1]

    # -- base-path (d == 2) helpers ---------------------------------------

    def base_point_at(self, t: float) -> Vec2:
        if self.position_fn is not None:
            i, frac = self._bracket(t)
            if frac <= _NODE_SNAP:
                p = self.points[i]
            elif frac >= 1.0 - _NODE_SNAP:
                p = self.points[i + 1]
            else:
                return self.position_fn(t)
        else:
            p = self.value_at(t)
        return Vec2(float(p[0]), float(p[1]))

    def base_velocity_at(self, t: float) -> Vec2:
        if self.velocity_fn is not None:
            return self.velocity_fn(t)
        v = self.velocity_at(t)
        return Vec2(float(v[0]), float(v[1]))

    # -- compound-path (d == 4) helpers -------------------------------------

    def config_at(self, t: float) -> Config:
        p = self.value_at(t)
        return Config(Vec2(float(p[0]), float(p[1])), Vec2(float(p[2]), float(p[3])))

    def base_path(self) -> "SampledPath":
        """Projection of a compound path: the obstacle columns, same grid."""
        if self.dim != 4:
            raise ValueError("base_path() needs a compound (d == 4) path")
        return SampledPath(self.times, self.points[:, 2:4])

    def restricted(self, t_end: float) -> "SampledPath":
        """The sub-path on [t0, t_end]; t_end must exceed t0."""
        i, frac = self._bracket(t_end)
        if frac >= 1.0 - _NODE_SNAP:
            i += 1
            end_row = self.points[i]
            t_last = float(self.times[i])
        elif frac <= _NODE_SNAP:
            end_row = self.points[i]
            t_last = float(self.times[i])
        else:
            end_row = (1.0 - frac) * self.points[i] + frac * self.points[i + 1]
            t_last = t_end
        if i == 0 and t_last <= self.t0:
            raise ValueError("restriction must keep positive length")
        times = np.append(self.times[: i + 1], t_last) if t_last > self.times[i] else self.times[: i + 1]
        pts = np.vstack([self.points[: i + 1], end_row]) if t_last > self.times[i] else self.points[: i + 1]
        return SampledPath(times, pts, self.velocity_fn, self.position_fn)

    def reversed(self) -> "SampledPath":
        times = self.times[0] + self.times[-1] - self.times[::-1]
        return SampledPath(times, self.points[::-1].copy())


# ---------------------------------------------------------------------------
# mechanisms and forms


@dataclass(frozen=True)
class ReactionMechanism:
    """An instantaneous velocity rule for the ego vehicle.

    ``fiber_velocity(e, X)`` returns the ego velocity vM; ``evaluate`` wraps
    it into a compound tangent whose obstacle component is X.v verbatim, so
    the projection contract holds bitwise. ``linear`` declares linearity in
    X (connection-type mechanisms); the declaration is checked, not trusted,
    by ``verify_linearity``. Evaluation must be continuous and, for the ODE
    lift to have unique solutions, locally Lipschitz in the config; every
    built-in rule is, but the interface cannot enforce it for user rules.
    """

    name: str
    linear: bool
    fiber_velocity: Callable[[Config, BaseTangent], Vec2] = field(repr=False)

    def evaluate(self, e: Config, X: BaseTangent) -> TotalTangent:
        return TotalTangent(at=e, vM=self.fiber_velocity(e, X), vN=X.v)


@dataclass(frozen=True)
class ReactionForm:
    """A vertical correction term: contributes ego velocity, projects to zero."""

    name: str
    fiber_velocity: Callable[[Config, BaseTangent], Vec2] = field(repr=False)

    def evaluate(self, e: Config, X: BaseTangent) -> TotalTangent:
        return TotalTangent(at=e, vM=self.fiber_velocity(e, X), vN=ZERO2)


@dataclass(frozen=True)
class ActuationFunction:
    """Scalar cutoff psi(r): 1 at contact range, fading to 0 at r_off."""

    r_on: float
    r_off: float
    rule: Callable[[float], float] = field(repr=False)

    def __call__(self, r: float) -> float:
        return self.rule(r)


def smoothstep_actuation() -> ActuationFunction:
    """C1 cutoff: 1 on [0, 2], cubic smoothstep down to 0 at 3."""

    def psi(r: float) -> float:
        if r <= 2.0:
            return 1.0
        if r >= 3.0:
            return 0.0
        u = r - 2.0
        return 1.0 - u * u * (3.0 - 2.0 * u)

    return ActuationFunction(r_on=2.0, r_off=3.0, rule=psi)


def mech_copy() -> ReactionMechanism:
    """Ego copies the obstacle velocity; the offset cM - cN stays constant."""
    return ReactionMechanism("copy", linear=True, fiber_velocity=lambda e, X: X.v)


def mech_damped(psi: ActuationFunction) -> ReactionMechanism:
    """Copy the obstacle velocity scaled by psi(distance): no reaction far away."""

    def fv(e: Config, X: BaseTangent) -> Vec2:
        return X.v * psi(e.cM.distance_to(e.cN))

    return ReactionMechanism("damped", linear=True, fiber_velocity=fv)


def mech_radial(lam: float) -> ReactionMechanism:
    """Copy plus radial drift lam * (cM - cN); distance evolves as exp(lam*t).

    Affine, not linear, in the obstacle velocity whenever lam != 0 (adding a
    config-dependent constant breaks homogeneity); lam == 0 reduces to the
    plain copy mechanism and is flagged linear accordingly.
    """

    def fv(e: Config, X: BaseTangent) -> Vec2:
        d = e.cM - e.cN
        return Vec2(X.v.x + lam * d.x, X.v.y + lam * d.y)

    return ReactionMechanism(f"radial({lam})", linear=(lam == 0.0), fiber_velocity=fv)


def mech_orbit(mu: float) -> ReactionMechanism:
    """Copy plus tangential drift mu * rot90(cM - cN): circling at angular rate mu."""

    def fv(e: Config, X: BaseTangent) -> Vec2:
        d = e.cM - e.cN
        return Vec2(X.v.x - mu * d.y, X.v.y + mu * d.x)

    return ReactionMechanism(f"orbit({mu})", linear=(mu == 0.0), fiber_velocity=fv)


def mech_linear_const(alpha: float, beta: float) -> ReactionMechanism:
    """Constant-coefficient linear rule vM = alpha*vN + beta*rot90(vN)."""
    if alpha == 0.0 and beta == 0.0:
        raise InvalidParameters("(alpha, beta) = (0, 0) is excluded")
    A = conformal(alpha, beta)

    def fv(e: Config, X: BaseTangent) -> Vec2:
        return A.apply(X.v)

    return ReactionMechanism(f"linear_const({alpha},{beta})", linear=True, fiber_velocity=fv)


def affine_combine(
    theta: Callable[[Config], float],
    L1: ReactionMechanism,
    L2: ReactionMechanism,
) -> ReactionMechanism:
    """Blend two mechanisms with a config-dependent weight theta(e).

    The obstacle component survives the blend (theta + (1-theta) = 1), so
    the result is again a mechanism. theta must be continuous; that is the
    caller's contract.
    """

    def fv(e: Config, X: BaseTangent) -> Vec2:
        w = theta(e)
        a = L1.fiber_velocity(e, X)
        b = L2.fiber_velocity(e, X)
        return Vec2(w * a.x + (1.0 - w) * b.x, w * a.y + (1.0 - w) * b.y)

    return ReactionMechanism(
        f"affine({L1.name},{L2.name})",
        linear=L1.linear and L2.linear,
        fiber_velocity=fv,
    )


def pushing_form(psi: ActuationFunction) -> ReactionForm:
    """Boundary repulsion: psi(distance) * |X| * unit(cM - cN).

    Positive homogeneous of degree 1 in the obstacle velocity but not
    linear (|X| is even), which is exactly what makes boundary repulsion
    possible at all.
    """

    def fv(e: Config, X: BaseTangent) -> Vec2:
        d = e.cM - e.cN
        r = d.norm()
        w = psi(r) * X.v.norm()
        if w == 0.0:
            return ZERO2
        return Vec2(w * d.x / r, w * d.y / r)

    return ReactionForm("pushing", fiber_velocity=fv)


def add_form(L: ReactionMechanism, forms: Sequence[ReactionForm]) -> ReactionMechanism:
    """Mechanism plus vertical corrections; forms add, projection unchanged."""
    if not forms:
        return L
    forms = tuple(forms)

    def fv(e: Config, X: BaseTangent) -> Vec2:
        v = L.fiber_velocity(e, X)
        x, y = v.x, v.y
        for f in forms:
            fw = f.fiber_velocity(e, X)
            x += fw.x
            y += fw.y
        return Vec2(x, y)

    name = "+".join([L.name] + [f.name for f in forms])
    return ReactionMechanism(name, linear=False, fiber_velocity=fv)


# ---------------------------------------------------------------------------
# lifting paths via the initial value problem


@dataclass(frozen=True)
class LiftOutcome:
    """Result of integrating a mechanism along an obstacle path.

    When the run hits the safety boundary, the path is truncated there:
    ``completed`` is False, ``collision_time`` holds the bisected contact
    time, and the final state sits on the boundary within 1e-9.
    """

    path: SampledPath
    completed: bool
    collision_time: Optional[float] = None

    def final_config(self) -> Config:
        return self.path.config_at(self.path.t1)

    def config_at(self, t: float) -> Config:
        return self.path.config_at(t)


def rk4_fiber_step(
    fv: Callable[[Config, BaseTangent], Vec2],
    t: float,
    x: float,
    y: float,
    h: float,
    pos: Callable[[float], Vec2],
    vel: Callable[[float], Vec2],
) -> tuple[float, float]:
    """One classical RK4 step of the ego center under a mechanism rule.

    The obstacle position/velocity are evaluated at the stage times; the
    realtime server uses this same function per tick so offline replays
    reproduce served states.
    """
    b0, v0 = pos(t), vel(t)
    tm = t + 0.5 * h
    bm, vm = pos(tm), vel(tm)
    te = t + h
    be, ve = pos(te), vel(te)
    k1 = fv(Config(Vec2(x, y), b0), BaseTangent(b0, v0))
    k2 = fv(Config(Vec2(x + 0.5 * h * k1.x, y + 0.5 * h * k1.y), bm), BaseTangent(bm, vm))
    k3 = fv(Config(Vec2(x + 0.5 * h * k2.x, y + 0.5 * h * k2.y), bm), BaseTangent(bm, vm))
    k4 = fv(Config(Vec2(x + h * k3.x, y + h * k3.y), be), BaseTangent(be, ve))
    return (
        x + (h / 6.0) * (k1.x + 2.0 * (k2.x + k3.x) + k4.x),
        y + (h / 6.0) * (k1.y + 2.0 * (k2.y + k3.y) + k4.y),
    )


def _bisect_contact(fv, t_prev, x_prev, y_prev, h, pos, vel):
    """Shrink the last step until the state lands on the boundary band."""
    lo, hi = 0.0, h
    mid = h
    mx, my = x_prev, y_prev
    b = pos(t_prev)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        mx, my = rk4_fiber_step(fv, t_prev, x_prev, y_prev, mid, pos, vel)
        b = pos(t_prev + mid)
        g = math.hypot(mx - b.x, my - b.y) - SAFE_DISTANCE
        if g > ADMISSIBILITY_TOL:
            lo = mid
        elif g < -ADMISSIBILITY_TOL:
            hi = mid
        else:
            break
    return t_prev + mid, mx, my, b


def integrate_lift(
    mechanism: ReactionMechanism,
    e0: Config,
    gamma: SampledPath,
    step: float = DEFAULT_STEP,
    t_end: Optional[float] = None,
) -> LiftOutcome:
    """Lift an obstacle path to a compound path starting at e0.

    Fixed-step RK4 drives the ego center; the obstacle coordinate of the
    output is copied from ``gamma`` at every node, so the projection of the
    result reproduces the input exactly at grid resolution. If a step lands
    beyond the safety boundary, the step is bisected in time down to a 1e-9
    boundary band and the outcome reports the collision.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    if gamma.dim != 2:
        raise ValueError("gamma must be a base (d == 2) path")
    t0 = gamma.t0
    t1 = gamma.t1 if t_end is None else float(t_end)
    b0 = gamma.base_point_at(t0)
    if project(e0).distance_to(b0) > BASE_MATCH_TOL:
        raise BasePointMismatch(
            f"project(e0) = {project(e0)} but gamma({t0}) = {b0}"
        )

    fv = mechanism.fiber_velocity
    pos = gamma.base_point_at
    vel = gamma.base_velocity_at
    n = max(1, round((t1 - t0) / step))
    h = (t1 - t0) / n

    times = np.empty(n + 1)
    pts = np.empty((n + 1, 4))
    times[0] = t0
    pts[0] = (e0.cM.x, e0.cM.y, b0.x, b0.y)
    x, y = e0.cM.x, e0.cM.y

    for k in range(n):
        t = t0 + k * h
        t_next = t1 if k == n - 1 else t0 + (k + 1) * h
        nx, ny = rk4_fiber_step(fv, t, x, y, t_next - t, pos, vel)
        if not (math.isfinite(nx) and math.isfinite(ny)):
            raise NonFiniteState(f"state diverged at t = {t_next}")
        b = pos(t_next)
        bd = math.hypot(nx - b.x, ny - b.y) - SAFE_DISTANCE
        if bd < -ADMISSIBILITY_TOL:
            t_c, cx, cy, bc = _bisect_contact(fv, t, x, y, t_next - t, pos, vel)
            if t_c <= times[k]:
                # contact resolved at (numerical) zero step length: the
                # previous node is already the contact state
                path = SampledPath(times[: k + 1].copy(), pts[: k + 1].copy())
                return LiftOutcome(path, completed=False, collision_time=float(times[k]))
            times[k + 1] = t_c
            pts[k + 1] = (cx, cy, bc.x, bc.y)
            path = SampledPath(times[: k + 2].copy(), pts[: k + 2].copy())
            return LiftOutcome(path, completed=False, collision_time=t_c)
        times[k + 1] = t_next
        pts[k + 1] = (nx, ny, b.x, b.y)
        x, y = nx, ny

    return LiftOutcome(SampledPath(times, pts), completed=True)


def verify_linearity(
    L: ReactionMechanism,
    samples: int = 200,
    tol: float = 1e-10,
    seed: int = 0,
) -> bool:
    """Randomized check of additivity and homogeneity in the base velocity.

    Draws ``samples`` random tuples (e, X1, X2, lam), lam spanning both
    signs, and tests L(e, X1+X2) = L(e, X1) + L(e, X2) and
    L(e, lam*X1) = lam * L(e, X1) componentwise within ``tol``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        cN = Vec2(*rng.uniform(-5.0, 5.0, 2))
        ang = rng.uniform(0.0, 2.0 * math.pi)
        dist = SAFE_DISTANCE + rng.uniform(0.0, 6.0)
        e = Config(cN + Vec2(dist * math.cos(ang), dist * math.sin(ang)), cN)
        v1 = Vec2(*rng.uniform(-3.0, 3.0, 2))
        v2 = Vec2(*rng.uniform(-3.0, 3.0, 2))
        lam = float(rng.uniform(-2.0, 2.0))
        X1 = BaseTangent(cN, v1)
        X2 = BaseTangent(cN, v2)
        w_sum = L.fiber_velocity(e, BaseTangent(cN, v1 + v2))
        w1 = L.fiber_velocity(e, X1)
        w2 = L.fiber_velocity(e, X2)
        if abs(w_sum.x - w1.x - w2.x) > tol or abs(w_sum.y - w1.y - w2.y) > tol:
            return False
        w_scaled = L.fiber_velocity(e, BaseTangent(cN, lam * v1))
        if abs(w_scaled.x - lam * w1.x) > tol or abs(w_scaled.y - lam * w1.y) > tol:
            return False
    return True
