// Wiring: websocket client, input capture, mechanism panel, render loop.
// One velocity message per animation frame, rendering reads a state
// snapshot, all physics lives on the server.

import { keysToVelocity, pointerToVelocity, Vec } from "./input.js";
import { activeParams, buildMechanismSpec, PanelKind, PANEL_KINDS } from "./panel.js";
import { mechanismMessage, resetMessage, velocityMessage } from "./protocol.js";
import { renderFrame } from "./render.js";
import { SandboxClient } from "./net.js";
import { SessionState } from "./state.js";
import { Camera } from "./view.js";

const canvas = document.getElementById("stage") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const statusEl = document.getElementById("status")!;
const mechSelect = document.getElementById("mech") as HTMLSelectElement;
const paramBox = document.getElementById("params")!;
const applyBtn = document.getElementById("apply") as HTMLButtonElement;
const resetBtn = document.getElementById("reset") as HTMLButtonElement;
const modeBtn = document.getElementById("mode") as HTMLButtonElement;
const panelMsg = document.getElementById("panel-msg")!;

const state = new SessionState();
const cam = new Camera(0, 0, 60, canvas.width, canvas.height);
const proto = location.protocol === "https:" ? "wss" : "ws";
const client = new SandboxClient(
    `${proto}://${location.host}/ws`,
    (f) => state.apply(f),
    (ok) => {
        state.connected = ok;
        statusEl.textContent = ok ? "connected" : "disconnected (retrying)";
    },
);

// --- mechanism panel -------------------------------------------------------

for (const kind of PANEL_KINDS) {
    const opt = document.createElement("option");
    opt.value = kind;
    opt.textContent = kind;
    mechSelect.appendChild(opt);
}

const sliders: Record<string, HTMLInputElement> = {};
const sliderDefs: Record<string, [number, number, number]> = {
    lambda: [-2, 2, 0.5],
    mu: [-3, 3, 1.0],
    alpha: [-3, 3, 2.0],
    beta: [-3, 3, 0.0],
};

function rebuildSliders(): void {
    paramBox.innerHTML = "";
    for (const name of activeParams(mechSelect.value as PanelKind)) {
        const [lo, hi, init] = sliderDefs[name];
        const label = document.createElement("label");
        label.textContent = `${name} `;
        const input = document.createElement("input");
        input.type = "range";
        input.min = String(lo);
        input.max = String(hi);
        input.step = "0.1";
        input.value = String(init);
        const readout = document.createElement("span");
        readout.textContent = input.value;
        input.oninput = () => (readout.textContent = input.value);
        label.appendChild(input);
        label.appendChild(readout);
        paramBox.appendChild(label);
        sliders[name] = input;
    }
}
mechSelect.onchange = rebuildSliders;
rebuildSliders();

applyBtn.onclick = () => {
    try {
        const params: Record<string, number> = {};
        for (const name of activeParams(mechSelect.value as PanelKind)) {
            params[name] = parseFloat(sliders[name].value);
        }
        const spec = buildMechanismSpec(mechSelect.value as PanelKind, params);
        state.mechanism = spec;
        client.send(mechanismMessage(spec));
        panelMsg.textContent = `sent ${mechSelect.value}`;
    } catch (err) {
        panelMsg.textContent = String(err);
    }
};

resetBtn.onclick = () => {
    client.send(resetMessage([3, 0], [0, 0]));
    state.clearTrail();
};

modeBtn.onclick = () => {
    state.inputMode = state.inputMode === "pointer" ? "keyboard" : "pointer";
    modeBtn.textContent = `input: ${state.inputMode}`;
};

// --- input capture ---------------------------------------------------------

let pointerWorld: Vec | null = null;
let pointerDown = false;
const keys = new Set<string>();

canvas.addEventListener("pointermove", (ev) => {
    const rect = canvas.getBoundingClientRect();
    pointerWorld = cam.screenToWorld({ x: ev.clientX - rect.left, y: ev.clientY - rect.top });
});
canvas.addEventListener("pointerdown", () => (pointerDown = true));
canvas.addEventListener("pointerup", () => (pointerDown = false));
canvas.addEventListener("pointerleave", () => {
    pointerWorld = null;
    pointerDown = false;
});
window.addEventListener("keydown", (ev) => {
    if (ev.key.startsWith("Arrow")) {
        keys.add(ev.key);
        ev.preventDefault();
    }
});
window.addEventListener("keyup", (ev) => keys.delete(ev.key));
canvas.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    const rect = canvas.getBoundingClientRect();
    cam.zoom(ev.deltaY < 0 ? 1.1 : 1 / 1.1, {
        x: ev.clientX - rect.left,
        y: ev.clientY - rect.top,
    });
});

function currentVelocity(): Vec {
    const f = state.latest;
    if (f === null) return { x: 0, y: 0 };
    if (state.inputMode === "pointer") {
        if (pointerWorld === null || !pointerDown) return { x: 0, y: 0 };
        return pointerToVelocity(pointerWorld, { x: f.cN[0], y: f.cN[1] }, state.vmax);
    }
    return keysToVelocity(keys, state.vmax);
}

// --- main loop: at most one velocity message per animation frame -----------

function tick(): void {
    const v = currentVelocity();
    client.send(velocityMessage(v.x, v.y));
    renderFrame(ctx, cam, state);
    requestAnimationFrame(tick);
}

client.connect();
requestAnimationFrame(tick);
