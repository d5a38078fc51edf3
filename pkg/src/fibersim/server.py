"""Realtime adversary sandbox server.

One simulation loop owns all mutable state and ticks at a fixed 60 Hz; each
tick advances a single RK4 step of the selected mechanism, treating the
human-supplied obstacle velocity as constant across the tick, then
broadcasts a state frame to every connected client. Incoming messages are
fed to the loop through a queue; malformed input gets an error frame and
never brings the loop down. On collision the simulation freezes (frames
keep flowing with ``collided: true``) until a reset.

The browser UI is served as static assets when a built frontend is found.
"""

from __future__ import annotations

import asyncio
import json
import logging
import math
from contextlib import asynccontextmanager
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from .errors import FibersimError
from .geometry import Vec2, ZERO2
from .bundle import ADMISSIBILITY_TOL, SAFE_DISTANCE, Config, boundary_distance
from .lifting import rk4_fiber_step, _bisect_contact
from . import analysis, scenario

log = logging.getLogger("fibersim.server")

DEFAULT_TICK_HZ = 60.0
DEFAULT_VMAX = 5.0

START_CM = Vec2(3.0, 0.0)
START_CN = Vec2(0.0, 0.0)


class SimSession:
    """Server-authoritative state for one sandbox run."""

    def __init__(self, vmax: float = DEFAULT_VMAX, step: float = 1.0 / DEFAULT_TICK_HZ):
        self.vmax = float(vmax)
        self.step = float(step)
        self.mech_spec: dict = {"type": "copy"}
        self.mechanism = scenario.build_mechanism(self.mech_spec)
        self.geometry: Optional[analysis.CollisionGeometry] = None
        self.t = 0.0
        self.cM = START_CM
        self.cN = START_CN
        self.vN = ZERO2
        self.collided = False

    # -- message handling ---------------------------------------------------

    def apply(self, msg: dict) -> Optional[str]:
        """Apply one client message; returns an error string on rejection."""
        if not isinstance(msg, dict):
            return "expected a JSON object"
        kind = msg.get("type")
        try:
            if kind == "velocity":
                return self._apply_velocity(msg)
            if kind == "mechanism":
                return self._apply_mechanism(msg)
            if kind == "reset":
                return self._apply_reset(msg)
        except FibersimError as exc:
            return str(exc)
        except (TypeError, ValueError, KeyError) as exc:
            return f"malformed message: {exc}"
        return f"unknown message type {kind!r}"

    def _apply_velocity(self, msg: dict) -> Optional[str]:
        vx, vy = msg["vx"], msg["vy"]
        if not all(isinstance(c, (int, float)) and math.isfinite(c) for c in (vx, vy)):
            return "velocity components must be finite numbers"
        v = Vec2(float(vx), float(vy))
        speed = v.norm()
        if speed > self.vmax:
            v = v * (self.vmax / speed)
        self.vN = v
        return None

    def _apply_mechanism(self, msg: dict) -> Optional[str]:
        spec = scenario.validate_mechanism_spec(msg["spec"], "spec")
        self.mechanism = scenario.build_mechanism(spec)
        self.mech_spec = spec
        self._refresh_geometry()
        return None

    def _apply_reset(self, msg: dict) -> Optional[str]:
        cM = Vec2(float(msg["cM"][0]), float(msg["cM"][1]))
        cN = Vec2(float(msg["cN"][0]), float(msg["cN"][1]))
        if boundary_distance(Config(cM, cN)) < -ADMISSIBILITY_TOL:
            return "reset rejected: configuration overlaps"
        self.t = 0.0
        self.cM, self.cN = cM, cN
        self.vN = ZERO2
        self.collided = False
        self._refresh_geometry()
        return None

    def _refresh_geometry(self):
        # disks exist only for a plain constant-coefficient mechanism away
        # from the offset-conserving parameters
        self.geometry = None
        params = scenario.linear_const_params(self.mech_spec)
        if params is not None and params != (1.0, 0.0):
            try:
                self.geometry = analysis.collision_geometry(params[0], params[1], self.cM, self.cN)
            except FibersimError:
                self.geometry = None

    # -- simulation ----------------------------------------------------------

    def tick(self):
        """Advance one RK4 step with the held obstacle velocity; freeze on collision."""
        if self.collided:
            return
        h = self.step
        t, cN, vN = self.t, self.cN, self.vN

        def pos(tau: float) -> Vec2:
            return Vec2(cN.x + vN.x * (tau - t), cN.y + vN.y * (tau - t))

        def vel(tau: float) -> Vec2:
            return vN

        fv = self.mechanism.fiber_velocity
        nx, ny = rk4_fiber_step(fv, t, self.cM.x, self.cM.y, h, pos, vel)
        if not (math.isfinite(nx) and math.isfinite(ny)):
            log.warning("non-finite state at t=%s; freezing", t + h)
            self.collided = True
            return
        b = pos(t + h)
        if math.hypot(nx - b.x, ny - b.y) - SAFE_DISTANCE < -ADMISSIBILITY_TOL:
            t_c, cx, cy, bc = _bisect_contact(fv, t, self.cM.x, self.cM.y, h, pos, vel)
            self.t, self.cM, self.cN = t_c, Vec2(cx, cy), bc
            self.collided = True
            return
        self.t, self.cM, self.cN = t + h, Vec2(nx, ny), b

    def frame(self) -> dict:
        overlays = {"cTilde0": None, "rD": None, "rDPrime": None}
        if self.geometry is not None:
            overlays = {
                "cTilde0": [self.geometry.c_tilde0.x, self.geometry.c_tilde0.y],
                "rD": self.geometry.r_d,
                "rDPrime": self.geometry.r_d_prime,
            }
        return {
            "type": "state",
            "t": self.t,
            "cM": [self.cM.x, self.cM.y],
            "cN": [self.cN.x, self.cN.y],
            "dist": self.cM.distance_to(self.cN),
            "collided": self.collided,
            "overlays": overlays,
        }


def default_ui_dir() -> Optional[Path]:
    here = Path(__file__).resolve()
    for candidate in (
        Path.cwd() / "frontend" / "dist",
        here.parents[2] / "frontend" / "dist",  # src layout checkout
        here.parents[3] / "frontend" / "dist",
    ):
        if candidate.is_dir():
            return candidate
    return None


def build_app(
    vmax: float = DEFAULT_VMAX,
    step: float = 1.0 / DEFAULT_TICK_HZ,
    tick_hz: float = DEFAULT_TICK_HZ,
    static_dir: Optional[Path] = None,
) -> FastAPI:
    session = SimSession(vmax=vmax, step=step)
    clients: set[WebSocket] = set()
    inbox: asyncio.Queue = asyncio.Queue()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        task = asyncio.create_task(run_loop())
        try:
            yield
        finally:
            task.cancel()

    app = FastAPI(lifespan=lifespan)
    app.state.session = session

    async def run_loop():
        period = 1.0 / tick_hz
        while True:
            while not inbox.empty():
                ws, msg = inbox.get_nowait()
                try:
                    err = session.apply(msg)
                except Exception as exc:  # the loop must survive anything
                    err = f"internal error: {exc}"
                if err is not None:
                    await _safe_send(ws, {"type": "error", "msg": err})
            session.tick()
            frame = json.dumps(session.frame())
            for ws in list(clients):
                try:
                    await ws.send_text(frame)
                except Exception:
                    clients.discard(ws)
            await asyncio.sleep(period)

    async def _safe_send(ws: WebSocket, obj: dict):
        try:
            await ws.send_text(json.dumps(obj))
        except Exception:
            clients.discard(ws)

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        clients.add(ws)
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    msg = json.loads(raw)
                except json.JSONDecodeError as exc:
                    await _safe_send(ws, {"type": "error", "msg": f"invalid JSON: {exc.msg}"})
                    continue
                inbox.put_nowait((ws, msg))
        except WebSocketDisconnect:
            pass
        finally:
            clients.discard(ws)

    ui = static_dir if static_dir is not None else default_ui_dir()
    if ui is not None:
        app.mount("/", StaticFiles(directory=str(ui), html=True), name="ui")
    return app


def run_serve(port: int, vmax: float = DEFAULT_VMAX, step: float = 1.0 / DEFAULT_TICK_HZ):
    import uvicorn

    app = build_app(vmax=vmax, step=step)
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")
