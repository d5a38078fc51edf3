"""Protocol tests against the realtime sandbox server.

The loop runs on real time, so tests reconstruct the per-tick applied
velocities from consecutive obstacle positions rather than assuming when a
message landed; replays then feed those velocities back through the
fixed-step integrator.
"""

import json
import math

import numpy as np
import pytest
from fastapi.testclient import TestClient

from fibersim.geometry import Vec2
from fibersim.bundle import Config
from fibersim.lifting import SampledPath, integrate_lift
from fibersim.scenario import build_mechanism
from fibersim.server import build_app

STEP = 1.0 / 60.0


@pytest.fixture
def client():
    app = build_app(vmax=5.0, step=STEP, tick_hz=240.0)
    with TestClient(app) as c:
        with c.websocket_connect("/ws") as ws:
            yield ws


def states(ws, n):
    out = []
    while len(out) < n:
        f = ws.receive_json()
        if f["type"] == "state":
            out.append(f)
    return out


def send(ws, obj):
    ws.send_text(json.dumps(obj))


def test_zero_velocity_keeps_distance(client):
    send(client, {"type": "velocity", "vx": 0.0, "vy": 0.0})
    frames = states(client, 30)
    assert all(f["dist"] == 3.0 for f in frames)
    assert all(not f["collided"] for f in frames)


def test_copy_keeps_distance_under_driving(client):
    send(client, {"type": "velocity", "vx": 3.0, "vy": -2.0})
    frames = states(client, 40)
    assert all(abs(f["dist"] - 3.0) <= 1e-9 for f in frames)
    assert frames[-1]["cN"] != [0.0, 0.0]


def test_velocity_clamped_to_vmax(client):
    send(client, {"type": "velocity", "vx": 300.0, "vy": 400.0})
    frames = states(client, 20)
    for a, b in zip(frames, frames[1:]):
        dt = b["t"] - a["t"]
        if dt <= 0:
            continue
        move = math.hypot(b["cN"][0] - a["cN"][0], b["cN"][1] - a["cN"][1])
        assert move <= 5.0 * dt * (1.0 + 1e-9)


def test_unknown_message_gets_error_frame(client):
    send(client, {"type": "teleport"})
    for _ in range(20):
        f = client.receive_json()
        if f["type"] == "error":
            assert "unknown" in f["msg"]
            break
    else:
        pytest.fail("no error frame")


def test_malformed_json_gets_error_frame(client):
    client.send_text("{nope")
    for _ in range(20):
        f = client.receive_json()
        if f["type"] == "error":
            assert "JSON" in f["msg"]
            break
    else:
        pytest.fail("no error frame")


def test_reset_and_overlays(client):
    send(client, {"type": "mechanism", "spec": {"type": "linear_const", "alpha": 2.0, "beta": 0.0}})
    send(client, {"type": "reset", "cM": [3.0, 0.0], "cN": [0.0, 0.0]})
    frames = states(client, 10)
    f = frames[-1]
    assert f["overlays"]["cTilde0"] == [-3.0, 0.0]
    assert f["overlays"]["rD"] == 2.0 and f["overlays"]["rDPrime"] == 2.0
    # degenerate parameters: overlays stay null
    send(client, {"type": "mechanism", "spec": {"type": "linear_const", "alpha": 1.0, "beta": 0.0}})
    frames = states(client, 10)
    assert frames[-1]["overlays"]["cTilde0"] is None


def test_reset_rejects_overlap(client):
    send(client, {"type": "reset", "cM": [0.5, 0.0], "cN": [0.0, 0.0]})
    for _ in range(20):
        f = client.receive_json()
        if f["type"] == "error":
            assert "overlap" in f["msg"]
            break
    else:
        pytest.fail("no error frame")


def test_forced_collision_and_freeze(client):
    send(client, {"type": "mechanism", "spec": {"type": "linear_const", "alpha": 2.0, "beta": 0.0}})
    send(client, {"type": "reset", "cM": [3.0, 0.0], "cN": [0.0, 0.0]})
    # drive straight into the inner disk around (-3, 0)
    send(client, {"type": "velocity", "vx": -5.0, "vy": 0.0})
    collided = None
    for _ in range(400):
        f = client.receive_json()
        if f["type"] == "state" and f["collided"]:
            collided = f
            break
    assert collided is not None
    assert collided["dist"] <= 2.0 + 1e-6
    # frozen afterwards, even under new velocity commands
    send(client, {"type": "velocity", "vx": 5.0, "vy": 0.0})
    after = states(client, 10)
    assert all(f["collided"] and f["t"] == collided["t"] for f in after)
    assert all(f["cM"] == collided["cM"] and f["cN"] == collided["cN"] for f in after)
    # reset unfreezes
    send(client, {"type": "reset", "cM": [3.0, 0.0], "cN": [0.0, 0.0]})
    fresh = states(client, 5)
    assert not fresh[-1]["collided"]


def test_pushing_composite_repels(client):
    send(
        client,
        {
            "type": "mechanism",
            "spec": {"type": "composite", "base": {"type": "copy"}, "forms": [{"type": "pushing"}]},
        },
    )
    send(client, {"type": "reset", "cM": [2.5, 0.0], "cN": [0.0, 0.0]})
    send(client, {"type": "velocity", "vx": 5.0, "vy": 0.0})
    frames = states(client, 120)
    assert all(f["dist"] >= 2.0 - 1e-9 for f in frames)
    assert not any(f["collided"] for f in frames)


def test_mechanism_switch_keeps_state_continuous(client):
    send(client, {"type": "velocity", "vx": 2.0, "vy": 1.0})
    before = states(client, 5)[-1]
    send(client, {"type": "mechanism", "spec": {"type": "orbit", "mu": 1.0}})
    after = states(client, 3)[0]
    dt = after["t"] - before["t"]
    jump = math.hypot(after["cM"][0] - before["cM"][0], after["cM"][1] - before["cM"][1])
    # bounded by the largest velocity the orbit rule can produce here
    assert jump <= (5.0 + 2.0 * (before["dist"] + 1.0)) * dt + 1e-9


def _replay(frames, mech_spec):
    """Feed recorded per-tick base motion back through the integrator,
    accumulating the ego state across the whole session."""
    mech = build_mechanism(mech_spec)
    cfg = Config(Vec2(*frames[0]["cM"]), Vec2(*frames[0]["cN"]))
    worst = 0.0
    for a, b in zip(frames, frames[1:]):
        h = b["t"] - a["t"]
        v = Vec2((b["cN"][0] - a["cN"][0]) / h, (b["cN"][1] - a["cN"][1]) / h)
        gamma = SampledPath(
            np.array([a["t"], b["t"]]),
            np.array([a["cN"], b["cN"]]),
            velocity_fn=lambda t, v=v: v,
        )
        out = integrate_lift(mech, cfg, gamma, step=h)
        assert out.completed
        cfg = out.final_config()
        worst = max(
            worst,
            math.hypot(cfg.cM.x - b["cM"][0], cfg.cM.y - b["cM"][1]),
            math.hypot(cfg.cN.x - b["cN"][0], cfg.cN.y - b["cN"][1]),
        )
    return worst


def test_replay_reproduces_served_states(client):
    spec = {"type": "linear_const", "alpha": 0.5, "beta": 0.8}
    send(client, {"type": "mechanism", "spec": spec})
    send(client, {"type": "reset", "cM": [3.0, 0.0], "cN": [0.0, 0.0]})
    # wait until the restarted session is visible before driving
    for _ in range(40):
        f = client.receive_json()
        if f["type"] == "state" and f["t"] <= STEP * 1.5 and f["cM"] == [3.0, 0.0]:
            break
    else:
        pytest.fail("reset not observed")
    frames = [f]
    for vx, vy in [(1.5, 0.5), (0.0, -2.0), (-1.0, 1.0), (2.0, 2.0)]:
        send(client, {"type": "velocity", "vx": vx, "vy": vy})
        frames.extend(states(client, 15))
    assert not any(f["collided"] for f in frames)
    assert len(frames) > 40
    worst = _replay(frames, spec)
    assert worst <= 1e-12
