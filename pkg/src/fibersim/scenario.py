"""Scenario files, obstacle paths, and trajectory serialization.

A scenario is a strict JSON document (unknown fields rejected, explicit
``version``) naming a mechanism, an initial configuration, an obstacle path
spec, and integration settings. Trajectories round-trip through CSV with
17-significant-digit decimals, so replaying a file is bit-exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ScenarioError
from .geometry import Vec2, ZERO2
from .bundle import ADMISSIBILITY_TOL, Config, boundary_distance
from .lifting import (
    LiftOutcome,
    ReactionMechanism,
    SampledPath,
    add_form,
    affine_combine,
    mech_copy,
    mech_damped,
    mech_linear_const,
    mech_orbit,
    mech_radial,
    pushing_form,
    smoothstep_actuation,
)
from . import analysis

SCENARIO_VERSION = 1

CSV_HEADER = "t,cMx,cMy,cNx,cNy,dist,collided"


# ---------------------------------------------------------------------------
# strict field validation helpers


def _expect_obj(value, where: str) -> dict:
    if not isinstance(value, dict):
        raise ScenarioError(f"{where}: expected an object, got {type(value).__name__}")
    return value


def _check_fields(obj: dict, allowed: set[str], required: set[str], where: str):
    unknown = set(obj) - allowed
    if unknown:
        raise ScenarioError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ScenarioError(f"{where}: missing field(s) {sorted(missing)}")


def _number(obj: dict, key: str, where: str) -> float:
    v = obj.get(key)
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
        raise ScenarioError(f"{where}.{key}: expected a finite number")
    return float(v)


def _point(value, where: str) -> Vec2:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in value)
    ):
        raise ScenarioError(f"{where}: expected [x, y]")
    return Vec2(float(value[0]), float(value[1]))


# ---------------------------------------------------------------------------
# mechanism specs

_MECH_FIELDS = {
    "copy": set(),
    "damped": set(),
    "radial": {"lambda"},
    "orbit": {"mu"},
    "linear_const": {"alpha", "beta"},
    "composite": {"base", "forms", "theta", "other"},
}


def validate_mechanism_spec(spec, where: str = "mechanism") -> dict:
    spec = _expect_obj(spec, where)
    kind = spec.get("type")
    if kind not in _MECH_FIELDS:
        raise ScenarioError(f"{where}.type: expected one of {sorted(_MECH_FIELDS)}, got {kind!r}")
    _check_fields(spec, _MECH_FIELDS[kind] | {"type"}, _required_mech_fields(kind), where)
    if kind == "radial":
        _number(spec, "lambda", where)
    elif kind == "orbit":
        _number(spec, "mu", where)
    elif kind == "linear_const":
        a, b = _number(spec, "alpha", where), _number(spec, "beta", where)
        if a == 0.0 and b == 0.0:
            raise ScenarioError(f"{where}: (alpha, beta) = (0, 0) is not a mechanism")
    elif kind == "composite":
        validate_mechanism_spec(spec["base"], f"{where}.base")
        forms = spec.get("forms", [])
        if not isinstance(forms, list):
            raise ScenarioError(f"{where}.forms: expected a list")
        for i, f in enumerate(forms):
            f = _expect_obj(f, f"{where}.forms[{i}]")
            _check_fields(f, {"type"}, {"type"}, f"{where}.forms[{i}]")
            if f["type"] != "pushing":
                raise ScenarioError(f"{where}.forms[{i}].type: only 'pushing' is available")
        if ("theta" in spec) != ("other" in spec):
            raise ScenarioError(f"{where}: theta and other must be given together")
        if "theta" in spec:
            w = _number(spec, "theta", where)
            if not 0.0 <= w <= 1.0:
                raise ScenarioError(f"{where}.theta: expected a weight in [0, 1]")
            validate_mechanism_spec(spec["other"], f"{where}.other")
    return spec


def _required_mech_fields(kind: str) -> set[str]:
    return {
        "copy": {"type"},
        "damped": {"type"},
        "radial": {"type", "lambda"},
        "orbit": {"type", "mu"},
        "linear_const": {"type", "alpha", "beta"},
        "composite": {"type", "base"},
    }[kind]


def build_mechanism(spec: dict) -> ReactionMechanism:
    """Instantiate a validated mechanism spec."""
    kind = spec["type"]
    if kind == "copy":
        return mech_copy()
    if kind == "damped":
        return mech_damped(smoothstep_actuation())
    if kind == "radial":
        return mech_radial(float(spec["lambda"]))
    if kind == "orbit":
        return mech_orbit(float(spec["mu"]))
    if kind == "linear_const":
        return mech_linear_const(float(spec["alpha"]), float(spec["beta"]))
    base = build_mechanism(spec["base"])
    if "theta" in spec:
        w = float(spec["theta"])
        base = affine_combine(lambda e: w, base, build_mechanism(spec["other"]))
    forms = [pushing_form(smoothstep_actuation()) for f in spec.get("forms", [])]
    return add_form(base, forms)


def linear_const_params(spec: dict) -> Optional[tuple[float, float]]:
    """(alpha, beta) when the spec is a plain constant-coefficient rule."""
    if spec.get("type") == "linear_const":
        return float(spec["alpha"]), float(spec["beta"])
    return None


# ---------------------------------------------------------------------------
# obstacle paths

_PATH_FIELDS = {
    "constant": set(),
    "waypoints": {"points", "speed"},
    "adversary": {"speed"},
}


def validate_path_spec(spec, where: str = "obstacle_path") -> dict:
    spec = _expect_obj(spec, where)
    kind = spec.get("type")
    if kind not in _PATH_FIELDS:
        raise ScenarioError(f"{where}.type: expected one of {sorted(_PATH_FIELDS)}, got {kind!r}")
    required = {"type"} if kind != "adversary" else {"type", "speed"}
    if kind == "waypoints":
        required = {"type", "points"}
    _check_fields(spec, _PATH_FIELDS[kind] | {"type"}, required, where)
    if kind == "waypoints":
        pts = spec["points"]
        if not isinstance(pts, list) or not pts:
            raise ScenarioError(f"{where}.points: expected a non-empty list of [x, y]")
        for i, p in enumerate(pts):
            _point(p, f"{where}.points[{i}]")
        if "speed" in spec and _number(spec, "speed", where) <= 0:
            raise ScenarioError(f"{where}.speed: must be positive")
    if kind == "adversary" and _number(spec, "speed", where) <= 0:
        raise ScenarioError(f"{where}.speed: must be positive")
    return spec


def spline_base_path(
    waypoints,
    t0: float = 0.0,
    t1: float = 1.0,
    n: int = 1001,
) -> SampledPath:
    """Natural cubic spline through waypoints, parametrized by time directly.

    The analytic spline derivative rides along as the path's velocity rule,
    which keeps lifts consistent with the sampled positions to integrator
    accuracy (central differences would cap accuracy at the grid scale).
    """
    w = np.asarray(waypoints, dtype=float)
    if w.ndim != 2 or w.shape[1] != 2 or len(w) < 2:
        raise ValueError("waypoints must be an (m >= 2, 2) array")
    knots = np.linspace(t0, t1, len(w))
    spline = CubicSpline(knots, w, bc_type="natural")
    deriv = spline.derivative()

    def position(t: float) -> Vec2:
        p = spline(t)
        return Vec2(float(p[0]), float(p[1]))

    def velocity(t: float) -> Vec2:
        d = deriv(t)
        return Vec2(float(d[0]), float(d[1]))

    times = np.linspace(t0, t1, n)
    return SampledPath(times, spline(times), velocity_fn=velocity, position_fn=position)


def arclength_spline_path(
    waypoints,
    duration: float,
    speed: Optional[float] = None,
    n: int = 1001,
) -> SampledPath:
    """Natural cubic spline traversed at constant speed.

    The reparametrization u(t) solves du/dt = speed / |S'(u)| on a dense
    grid and is then interpolated with a C2 spline; positions come from
    S(u(t)) and velocities from the exact chain rule S'(u(t)) * u'(t), so
    the velocity rule is the true derivative of the sampled positions
    (lifts of boundary-hugging plans would otherwise drift out of the
    admissibility band). When ``speed`` is omitted the whole spline is
    covered in exactly ``duration`` seconds; otherwise the path holds its
    final point once exhausted, or stops mid-spline if time runs out.
    """
    w = np.asarray(waypoints, dtype=float)
    keep = np.ones(len(w), dtype=bool)
    keep[1:] = np.linalg.norm(np.diff(w, axis=0), axis=1) > 1e-12
    w = w[keep]
    if len(w) < 2:
        point = Vec2(float(w[0, 0]), float(w[0, 1]))
        return SampledPath.constant_base(point, 0.0, duration, n=max(2, n))

    u_knots = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(w, axis=0), axis=1))])
    u_knots /= u_knots[-1]
    spline = CubicSpline(u_knots, w, bc_type="natural")
    deriv = spline.derivative()

    u_fine = np.linspace(0.0, 1.0, 4097)
    speeds_u = np.linalg.norm(deriv(u_fine), axis=1)
    seg = 0.5 * (speeds_u[1:] + speeds_u[:-1]) * np.diff(u_fine)
    total_len = float(np.sum(seg))
    if speed is None:
        speed = total_len / duration
    t_cover = min(duration, total_len / speed)

    def u_rate(u: float) -> float:
        d = deriv(min(max(u, 0.0), 1.0))
        return speed / max(math.hypot(float(d[0]), float(d[1])), 1e-12)

    m = 4096
    h = t_cover / m
    u_samples = np.empty(m + 1)
    u_samples[0] = 0.0
    u = 0.0
    for i in range(m):
        k1 = u_rate(u)
        k2 = u_rate(u + 0.5 * h * k1)
        k3 = u_rate(u + 0.5 * h * k2)
        k4 = u_rate(u + h * k3)
        u = min(u + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4), 1.0)
        u_samples[i + 1] = u
    if t_cover < duration:
        u_samples[-1] = 1.0
    u_samples = np.maximum.accumulate(u_samples)
    u_of_t = CubicSpline(np.linspace(0.0, t_cover, m + 1), u_samples)
    du_dt = u_of_t.derivative()

    def position(t: float) -> Vec2:
        uu = 1.0 if t >= t_cover else min(max(float(u_of_t(t)), 0.0), 1.0)
        p = spline(uu)
        return Vec2(float(p[0]), float(p[1]))

    def velocity(t: float) -> Vec2:
        if t >= t_cover or t < 0.0:
            return ZERO2
        uu = min(max(float(u_of_t(t)), 0.0), 1.0)
        d = deriv(uu) * float(du_dt(t))
        return Vec2(float(d[0]), float(d[1]))

    return SampledPath.from_function(position, 0.0, duration, n, velocity_fn=velocity)


def spline_gamma(rng, start: Vec2, spread: float = 2.0, waypoints: int = 5, n: int = 1001) -> SampledPath:
    """A random smooth obstacle path starting at ``start`` (for sweeps and tests)."""
    w = np.empty((waypoints, 2))
    w[0] = (start.x, start.y)
    w[1:, 0] = start.x + rng.uniform(-spread, spread, waypoints - 1)
    w[1:, 1] = start.y + rng.uniform(-spread, spread, waypoints - 1)
    return spline_base_path(w, 0.0, 1.0, n=n)


# ---------------------------------------------------------------------------
# scenarios


@dataclass(frozen=True)
class Scenario:
    version: int
    mechanism_spec: dict
    initial: Config
    path_spec: dict
    duration: float
    step: float
    seed: int

    def build_mechanism(self) -> ReactionMechanism:
        return build_mechanism(self.mechanism_spec)

    def build_obstacle_path(self) -> SampledPath:
        kind = self.path_spec["type"]
        n = max(2, round(self.duration / self.step) + 1)
        if kind == "constant":
            return SampledPath.constant_base(self.initial.cN, 0.0, self.duration, n=n)
        if kind == "waypoints":
            pts = [[self.initial.cN.x, self.initial.cN.y]] + [
                [float(p[0]), float(p[1])] for p in self.path_spec["points"]
            ]
            return arclength_spline_path(pts, self.duration, self.path_spec.get("speed"), n=n)
        # adversary: requires a non-degenerate constant-coefficient mechanism
        params = linear_const_params(self.mechanism_spec)
        if params is None:
            raise ScenarioError(
                "obstacle_path: adversary paths need a linear_const mechanism"
            )
        geom = analysis.collision_geometry(params[0], params[1], self.initial.cM, self.initial.cN)
        if geom.degenerate:
            raise ScenarioError(
                "obstacle_path: no adversary exists for (alpha, beta) = (1, 0)"
            )
        path = analysis.adversary_path(geom, self.initial.cN, float(self.path_spec["speed"]), n=n)
        if path.t1 > self.duration:
            return path.restricted(self.duration)
        return path


def parse_scenario(obj) -> Scenario:
    obj = _expect_obj(obj, "scenario")
    _check_fields(
        obj,
        {"version", "mechanism", "initial", "obstacle_path", "duration", "step", "seed"},
        {"version", "mechanism", "initial", "obstacle_path", "duration", "step"},
        "scenario",
    )
    if obj["version"] != SCENARIO_VERSION:
        raise ScenarioError(f"scenario.version: expected {SCENARIO_VERSION}, got {obj['version']!r}")
    mech = validate_mechanism_spec(obj["mechanism"])
    initial = _expect_obj(obj["initial"], "initial")
    _check_fields(initial, {"cM", "cN"}, {"cM", "cN"}, "initial")
    cM = _point(initial["cM"], "initial.cM")
    cN = _point(initial["cN"], "initial.cN")
    config = Config(cM, cN)
    if boundary_distance(config) < -ADMISSIBILITY_TOL:
        raise ScenarioError(
            f"initial: |cM - cN| = {cM.distance_to(cN):.6g} < 2; configuration overlaps"
        )
    path = validate_path_spec(obj["obstacle_path"])
    duration = _number(obj, "duration", "scenario")
    step = _number(obj, "step", "scenario")
    if duration <= 0:
        raise ScenarioError("scenario.duration: must be positive")
    if step <= 0:
        raise ScenarioError("scenario.step: must be positive")
    seed = obj.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ScenarioError("scenario.seed: expected an integer")
    return Scenario(SCENARIO_VERSION, mech, config, path, duration, step, seed)


def load_scenario(path: str) -> Scenario:
    try:
        with open(path) as f:
            obj = json.load(f)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_scenario(obj)


# ---------------------------------------------------------------------------
# trajectory records


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class TrajectoryRecord:
    """A trajectory table ready for CSV export; distances are recomputed
    from positions on access, never stored."""

    times: np.ndarray
    points: np.ndarray  # (n, 4): cMx, cMy, cNx, cNy
    collision_time: Optional[float] = None

    @classmethod
    def from_outcome(cls, outcome: LiftOutcome) -> "TrajectoryRecord":
        return cls(
            outcome.path.times,
            outcome.path.points,
            None if outcome.completed else outcome.collision_time,
        )

    def dist(self) -> np.ndarray:
        return np.hypot(
            self.points[:, 0] - self.points[:, 2],
            self.points[:, 1] - self.points[:, 3],
        )

    def write_csv(self, f: IO[str], extra_column: Optional[tuple[str, list[str]]] = None):
        header = CSV_HEADER
        if extra_column is not None:
            header += "," + extra_column[0]
        f.write(header + "\n")
        dist = self.dist()
        last = len(self.times) - 1
        for i in range(len(self.times)):
            collided = 1 if (self.collision_time is not None and i == last) else 0
            row = [
                _fmt(self.times[i]),
                _fmt(self.points[i, 0]),
                _fmt(self.points[i, 1]),
                _fmt(self.points[i, 2]),
                _fmt(self.points[i, 3]),
                _fmt(dist[i]),
                str(collided),
            ]
            if extra_column is not None:
                row.append(extra_column[1][i])
            f.write(",".join(row) + "\n")
        if self.collision_time is not None:
            f.write(f"# collision_time={_fmt(self.collision_time)}\n")

    @classmethod
    def read_csv(cls, f: IO[str]) -> "TrajectoryRecord":
        header = f.readline().strip()
        if not header.startswith(CSV_HEADER):
            raise ValueError(f"unexpected CSV header: {header!r}")
        times, pts = [], []
        collision_time = None
        for line in f:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "collision_time=" in line:
                    collision_time = float(line.split("=", 1)[1])
                continue
            cells = line.split(",")
            times.append(float(cells[0]))
            pts.append([float(c) for c in cells[1:5]])
        return cls(np.array(times), np.array(pts), collision_time)
