import io

import numpy as np
import pytest

from fibersim.errors import ScenarioError
from fibersim.geometry import Vec2
from fibersim.bundle import Config
from fibersim.lifting import integrate_lift, mech_copy
from fibersim.scenario import (
    TrajectoryRecord,
    arclength_spline_path,
    build_mechanism,
    parse_scenario,
    spline_base_path,
    validate_mechanism_spec,
)


def base_scenario(**overrides):
    obj = {
        "version": 1,
        "mechanism": {"type": "copy"},
        "initial": {"cM": [3.0, 0.0], "cN": [0.0, 0.0]},
        "obstacle_path": {"type": "constant"},
        "duration": 1.0,
        "step": 0.01,
        "seed": 0,
    }
    obj.update(overrides)
    return obj


# ---------------------------------------------------------------------------
# validation


def test_parse_roundtrip():
    sc = parse_scenario(base_scenario())
    assert sc.initial == Config(Vec2(3, 0), Vec2(0, 0))
    assert sc.duration == 1.0 and sc.step == 0.01 and sc.seed == 0


def test_unknown_top_level_field_rejected():
    with pytest.raises(ScenarioError, match="unknown field.*extra"):
        parse_scenario(base_scenario(extra=1))


def test_unknown_mechanism_field_rejected():
    with pytest.raises(ScenarioError, match="mechanism"):
        parse_scenario(base_scenario(mechanism={"type": "copy", "gain": 2}))


def test_wrong_version_rejected():
    with pytest.raises(ScenarioError, match="version"):
        parse_scenario(base_scenario(version=2))


def test_missing_field_diagnostic_names_field():
    obj = base_scenario()
    del obj["duration"]
    with pytest.raises(ScenarioError, match="duration"):
        parse_scenario(obj)


def test_overlapping_initial_rejected():
    with pytest.raises(ScenarioError, match="initial"):
        parse_scenario(base_scenario(initial={"cM": [1.0, 0.0], "cN": [0.0, 0.0]}))


def test_bad_point_shape_rejected():
    with pytest.raises(ScenarioError, match="cM"):
        parse_scenario(base_scenario(initial={"cM": [1.0], "cN": [0.0, 0.0]}))


def test_zero_linear_const_rejected():
    with pytest.raises(ScenarioError):
        parse_scenario(base_scenario(mechanism={"type": "linear_const", "alpha": 0, "beta": 0}))


def test_adversary_requires_linear_const():
    sc = parse_scenario(base_scenario(obstacle_path={"type": "adversary", "speed": 1.0}))
    with pytest.raises(ScenarioError, match="adversary"):
        sc.build_obstacle_path()


def test_composite_theta_requires_other():
    with pytest.raises(ScenarioError, match="theta"):
        validate_mechanism_spec(
            {"type": "composite", "base": {"type": "copy"}, "theta": 0.5}
        )


# ---------------------------------------------------------------------------
# mechanism building


def test_build_each_mechanism(rng):
    specs = [
        {"type": "copy"},
        {"type": "damped"},
        {"type": "radial", "lambda": -0.5},
        {"type": "orbit", "mu": 2.0},
        {"type": "linear_const", "alpha": 2.0, "beta": 1.0},
        {"type": "composite", "base": {"type": "copy"}, "forms": [{"type": "pushing"}]},
        {
            "type": "composite",
            "base": {"type": "radial", "lambda": 1.0},
            "forms": [],
            "theta": 0.5,
            "other": {"type": "radial", "lambda": -1.0},
        },
    ]
    for spec in specs:
        m = build_mechanism(validate_mechanism_spec(spec))
        e = Config(Vec2(3, 0), Vec2(0, 0))
        from fibersim.bundle import BaseTangent, differential_project

        v = Vec2(*rng.uniform(-2, 2, 2))
        assert differential_project(m.evaluate(e, BaseTangent(e.cN, v))).v == v


def test_composite_blend_cancels(rng):
    spec = {
        "type": "composite",
        "base": {"type": "radial", "lambda": 1.0},
        "theta": 0.5,
        "other": {"type": "radial", "lambda": -1.0},
    }
    m = build_mechanism(validate_mechanism_spec(spec))
    from fibersim.bundle import BaseTangent

    e = Config(Vec2(3.7, -1.2), Vec2(0.5, 0.5))
    v = Vec2(1.3, -0.4)
    out = m.evaluate(e, BaseTangent(e.cN, v)).vM
    assert abs(out.x - v.x) <= 1e-12 and abs(out.y - v.y) <= 1e-12


# ---------------------------------------------------------------------------
# obstacle paths


def test_constant_path():
    sc = parse_scenario(base_scenario())
    g = sc.build_obstacle_path()
    assert g.t1 == 1.0
    assert np.all(g.points == [0.0, 0.0])


def test_spline_path_hits_waypoints():
    w = [[0, 0], [1, 1], [2, 0]]
    g = spline_base_path(w, 0, 1, n=101)
    assert g.base_point_at(0.0) == Vec2(0, 0)
    assert g.base_point_at(0.5).distance_to(Vec2(1, 1)) <= 1e-12
    assert g.base_point_at(1.0).distance_to(Vec2(2, 0)) <= 1e-12


def test_spline_velocity_is_consistent_derivative():
    w = [[0, 0], [1.5, 0.5], [0.5, 2.0], [-1.0, 1.0]]
    g = spline_base_path(w, 0, 1, n=501)
    h = 1e-6
    for t in (0.13, 0.4, 0.77):
        fd = (g.base_point_at(t + h) - g.base_point_at(t - h)) * (1.0 / (2 * h))
        v = g.base_velocity_at(t)
        assert fd.distance_to(v) <= 1e-6


def test_arclength_path_constant_speed():
    w = [[0, 0], [2, 1], [1, 3]]
    g = arclength_spline_path(w, 2.0, n=401)
    speeds = [g.base_velocity_at(t).norm() for t in np.linspace(0.05, 1.95, 77)]
    assert max(speeds) - min(speeds) <= 1e-4 * max(speeds)


def test_arclength_path_hold_at_end():
    w = [[0, 0], [1, 0]]
    g = arclength_spline_path(w, 4.0, speed=1.0, n=401)
    assert g.base_point_at(4.0).distance_to(Vec2(1, 0)) <= 1e-9
    assert g.base_velocity_at(3.5) == Vec2(0, 0)
    assert g.base_point_at(2.0).distance_to(Vec2(1, 0)) <= 1e-9


def test_waypoint_scenario_starts_at_initial():
    sc = parse_scenario(
        base_scenario(obstacle_path={"type": "waypoints", "points": [[1.0, 1.0]]})
    )
    g = sc.build_obstacle_path()
    assert g.base_point_at(0.0) == Vec2(0, 0)
    assert g.base_point_at(1.0).distance_to(Vec2(1, 1)) <= 1e-9


# ---------------------------------------------------------------------------
# trajectory CSV round-trip


def test_csv_roundtrip_bitwise(rng):
    e = Config(Vec2(3.1, -0.7), Vec2(0.1, 0.4))
    from conftest import random_gamma

    gamma = random_gamma(rng, e.cN, n=101)
    out = integrate_lift(mech_copy(), e, gamma, step=0.01)
    rec = TrajectoryRecord.from_outcome(out)
    buf = io.StringIO()
    rec.write_csv(buf)
    buf.seek(0)
    back = TrajectoryRecord.read_csv(buf)
    assert np.array_equal(back.times, rec.times)
    assert np.array_equal(back.points, rec.points)
    assert back.collision_time == rec.collision_time


def test_csv_collision_comment_roundtrip():
    times = np.array([0.0, 0.5, 0.7612349871234])
    pts = np.array([[4.0, 0, 0, 0], [3.0, 0, 0, 0], [2.0, 0, 0, 0]])
    rec = TrajectoryRecord(times, pts, collision_time=0.7612349871234)
    buf = io.StringIO()
    rec.write_csv(buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "t,cMx,cMy,cNx,cNy,dist,collided"
    assert text.splitlines()[-1].startswith("# collision_time=")
    assert text.splitlines()[-2].endswith(",1")
    buf.seek(0)
    back = TrajectoryRecord.read_csv(buf)
    assert back.collision_time == rec.collision_time


def test_csv_dist_recomputed():
    times = np.array([0.0, 1.0])
    pts = np.array([[4.0, 0, 0, 0], [3.0, 4.0, 0, 0]])
    rec = TrajectoryRecord(times, pts)
    assert rec.dist() == pytest.approx([4.0, 5.0])
