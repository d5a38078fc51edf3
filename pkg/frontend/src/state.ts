// Client session state: the latest server-authoritative frame, an obstacle
// trail for rendering, and the locally selected mechanism/input mode. No
// physics happens here.

import { MechanismSpec, ServerFrame, StateFrame } from "./protocol.js";

export type InputMode = "pointer" | "keyboard";

const TRAIL_CAP = 900;

export class SessionState {
    latest: StateFrame | null = null;
    trail: [number, number][] = [];
    lastError: string | null = null;
    mechanism: MechanismSpec = { type: "copy" };
    inputMode: InputMode = "pointer";
    connected = false;
    vmax: number;

    constructor(vmax = 5.0) {
        this.vmax = vmax;
    }

    apply(frame: ServerFrame): void {
        if (frame.type === "error") {
            this.lastError = frame.msg;
            return;
        }
        const prev = this.latest;
        this.latest = frame;
        // restart detection: a reset rewinds server time
        if (prev !== null && frame.t < prev.t) {
            this.trail = [];
        }
        if (prev === null || frame.t !== prev.t) {
            this.trail.push([frame.cN[0], frame.cN[1]]);
            if (this.trail.length > TRAIL_CAP) {
                this.trail.splice(0, this.trail.length - TRAIL_CAP);
            }
        }
    }

    clearTrail(): void {
        this.trail = [];
    }
}
