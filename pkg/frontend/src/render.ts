// Canvas rendering of a state frame: safety disks for both vehicles, the
// obstacle trail, and — when a constant-coefficient linear mechanism is
// active — the inner (red) and outer (amber) collision disks around the
// center point. Collision freezes the scene behind a banner.

import { SessionState } from "./state.js";
import { Camera } from "./view.js";

// structural subset of CanvasRenderingContext2D, so tests can record calls
export interface Ctx {
    canvas: { width: number; height: number };
    fillStyle: string | CanvasGradient | CanvasPattern;
    strokeStyle: string | CanvasGradient | CanvasPattern;
    lineWidth: number;
    globalAlpha: number;
    font: string;
    textAlign: CanvasTextAlign;
    clearRect(x: number, y: number, w: number, h: number): void;
    fillRect(x: number, y: number, w: number, h: number): void;
    beginPath(): void;
    arc(x: number, y: number, r: number, a0: number, a1: number): void;
    moveTo(x: number, y: number): void;
    lineTo(x: number, y: number): void;
    stroke(): void;
    fill(): void;
    fillText(text: string, x: number, y: number): void;
}

function circle(ctx: Ctx, cam: Camera, cx: number, cy: number, r: number): void {
    const s = cam.worldToScreen({ x: cx, y: cy });
    ctx.beginPath();
    ctx.arc(s.x, s.y, r * cam.pixelsPerMeter, 0, 2 * Math.PI);
}

export function renderFrame(ctx: Ctx, cam: Camera, state: SessionState): void {
    const w = ctx.canvas.width;
    const h = ctx.canvas.height;
    ctx.globalAlpha = 1;
    ctx.fillStyle = "#10141a";
    ctx.fillRect(0, 0, w, h);

    const f = state.latest;
    if (f === null) {
        ctx.fillStyle = "#8899aa";
        ctx.font = "16px system-ui, sans-serif";
        ctx.textAlign = "center";
        ctx.fillText(state.connected ? "waiting for state…" : "connecting…", w / 2, h / 2);
        return;
    }

    // collision disks from the server's overlay (authoritative analysis)
    const ov = f.overlays;
    if (ov.cTilde0 !== null && ov.rDPrime !== null && ov.rD !== null) {
        ctx.globalAlpha = 0.25;
        ctx.fillStyle = "#e6a23c";
        circle(ctx, cam, ov.cTilde0[0], ov.cTilde0[1], ov.rDPrime);
        ctx.fill();
        ctx.fillStyle = "#e64d3c";
        circle(ctx, cam, ov.cTilde0[0], ov.cTilde0[1], ov.rD);
        ctx.fill();
        ctx.globalAlpha = 1;
        ctx.strokeStyle = "#e64d3c";
        ctx.lineWidth = 1;
        circle(ctx, cam, ov.cTilde0[0], ov.cTilde0[1], ov.rD);
        ctx.stroke();
    }

    // obstacle trail
    if (state.trail.length > 1) {
        ctx.strokeStyle = "#aa5555";
        ctx.lineWidth = 1;
        ctx.globalAlpha = 0.6;
        ctx.beginPath();
        const first = cam.worldToScreen({ x: state.trail[0][0], y: state.trail[0][1] });
        ctx.moveTo(first.x, first.y);
        for (const [x, y] of state.trail) {
            const s = cam.worldToScreen({ x, y });
            ctx.lineTo(s.x, s.y);
        }
        ctx.stroke();
        ctx.globalAlpha = 1;
    }

    // unit safety disks: ego blue, obstacle red
    ctx.lineWidth = 2;
    ctx.fillStyle = "rgba(80, 140, 255, 0.35)";
    ctx.strokeStyle = "#508cff";
    circle(ctx, cam, f.cM[0], f.cM[1], 1);
    ctx.fill();
    circle(ctx, cam, f.cM[0], f.cM[1], 1);
    ctx.stroke();
    ctx.fillStyle = "rgba(230, 80, 80, 0.35)";
    ctx.strokeStyle = "#e65050";
    circle(ctx, cam, f.cN[0], f.cN[1], 1);
    ctx.fill();
    circle(ctx, cam, f.cN[0], f.cN[1], 1);
    ctx.stroke();

    // HUD
    ctx.fillStyle = "#d5dde6";
    ctx.font = "14px ui-monospace, monospace";
    ctx.textAlign = "left";
    ctx.fillText(`t = ${f.t.toFixed(2)} s   dist = ${f.dist.toFixed(3)}   vmax = ${state.vmax}`, 12, 22);
    if (state.lastError !== null) {
        ctx.fillStyle = "#e6a23c";
        ctx.fillText(`server: ${state.lastError}`, 12, 42);
    }

    if (f.collided) {
        ctx.globalAlpha = 0.75;
        ctx.fillStyle = "#30060a";
        ctx.fillRect(0, h / 2 - 44, w, 88);
        ctx.globalAlpha = 1;
        ctx.fillStyle = "#ff6b6b";
        ctx.font = "28px system-ui, sans-serif";
        ctx.textAlign = "center";
        ctx.fillText(`COLLISION at t = ${f.t.toFixed(3)} s — reset to continue`, w / 2, h / 2 + 9);
    }
}
