import { describe, expect, it } from "vitest";

import { Ctx, renderFrame } from "../src/render.js";
import { SessionState } from "../src/state.js";
import { Camera } from "../src/view.js";

function recordingCtx() {
    const calls: { op: string; args: unknown[] }[] = [];
    const texts: string[] = [];
    const handler: Ctx = {
        canvas: { width: 800, height: 600 },
        fillStyle: "",
        strokeStyle: "",
        lineWidth: 1,
        globalAlpha: 1,
        font: "",
        textAlign: "left",
        clearRect: (...a) => void calls.push({ op: "clearRect", args: a }),
        fillRect: (...a) => void calls.push({ op: "fillRect", args: a }),
        beginPath: () => void calls.push({ op: "beginPath", args: [] }),
        arc: (...a) => void calls.push({ op: "arc", args: a }),
        moveTo: (...a) => void calls.push({ op: "moveTo", args: a }),
        lineTo: (...a) => void calls.push({ op: "lineTo", args: a }),
        stroke: () => void calls.push({ op: "stroke", args: [] }),
        fill: () => void calls.push({ op: "fill", args: [] }),
        fillText: (text, ...a) => {
            texts.push(text);
            calls.push({ op: "fillText", args: [text, ...a] });
        },
    };
    return { ctx: handler, calls, texts };
}

function stateWith(overlays: { cTilde0: [number, number] | null; rD: number | null; rDPrime: number | null }, collided = false) {
    const s = new SessionState();
    s.connected = true;
    s.apply({
        type: "state",
        t: 0.5,
        cM: [3, 0],
        cN: [0, 0],
        dist: 3,
        collided,
        overlays,
    });
    return s;
}

describe("renderFrame", () => {
    it("draws no collision disks when overlays are null", () => {
        const { ctx, calls } = recordingCtx();
        renderFrame(ctx, new Camera(), stateWith({ cTilde0: null, rD: null, rDPrime: null }));
        // only the two unit safety disks, drawn twice each (fill + stroke)
        expect(calls.filter((c) => c.op === "arc").length).toBe(4);
    });

    it("draws the collision disks for linear_const overlays", () => {
        const { ctx, calls } = recordingCtx();
        const cam = new Camera(0, 0, 60, 800, 600);
        renderFrame(ctx, cam, stateWith({ cTilde0: [-3, 0], rD: 2, rDPrime: 2 }));
        const arcs = calls.filter((c) => c.op === "arc");
        expect(arcs.length).toBe(7);
        // first arc is the amber outer disk at the center point
        const [x, y, r] = arcs[0].args as number[];
        const center = cam.worldToScreen({ x: -3, y: 0 });
        expect(x).toBeCloseTo(center.x);
        expect(y).toBeCloseTo(center.y);
        expect(r).toBeCloseTo(2 * cam.pixelsPerMeter);
    });

    it("shows the collision banner on collided frames", () => {
        const { ctx, texts } = recordingCtx();
        renderFrame(ctx, new Camera(), stateWith({ cTilde0: null, rD: null, rDPrime: null }, true));
        expect(texts.some((t) => t.includes("COLLISION"))).toBe(true);
    });

    it("renders a waiting message before the first frame", () => {
        const { ctx, texts } = recordingCtx();
        const s = new SessionState();
        renderFrame(ctx, new Camera(), s);
        expect(texts.some((t) => t.includes("connecting"))).toBe(true);
    });
});
