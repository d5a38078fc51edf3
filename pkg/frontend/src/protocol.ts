// Wire types for the sandbox websocket protocol. The server is the single
// source of truth; the client never simulates, it only validates and renders.

export interface Overlays {
    cTilde0: [number, number] | null;
    rD: number | null;
    rDPrime: number | null;
}

export interface StateFrame {
    type: "state";
    t: number;
    cM: [number, number];
    cN: [number, number];
    dist: number;
    collided: boolean;
    overlays: Overlays;
}

export interface ErrorFrame {
    type: "error";
    msg: string;
}

export type ServerFrame = StateFrame | ErrorFrame;

export type MechanismSpec =
    | { type: "copy" }
    | { type: "damped" }
    | { type: "radial"; lambda: number }
    | { type: "orbit"; mu: number }
    | { type: "linear_const"; alpha: number; beta: number }
    | { type: "composite"; base: MechanismSpec; forms: { type: "pushing" }[] };

function isPair(v: unknown): v is [number, number] {
    return (
        Array.isArray(v) &&
        v.length === 2 &&
        v.every((c) => typeof c === "number" && Number.isFinite(c))
    );
}

function isOverlays(v: unknown): v is Overlays {
    if (typeof v !== "object" || v === null) return false;
    const o = v as Record<string, unknown>;
    const okCenter = o.cTilde0 === null || isPair(o.cTilde0);
    const okR = (x: unknown) => x === null || (typeof x === "number" && Number.isFinite(x));
    return okCenter && okR(o.rD) && okR(o.rDPrime);
}

/** Validate a decoded server message; null means "skip this frame". */
export function parseServerFrame(raw: unknown): ServerFrame | null {
    if (typeof raw !== "object" || raw === null) return null;
    const o = raw as Record<string, unknown>;
    if (o.type === "error") {
        return typeof o.msg === "string" ? { type: "error", msg: o.msg } : null;
    }
    if (o.type !== "state") return null;
    if (
        typeof o.t !== "number" ||
        !Number.isFinite(o.t) ||
        !isPair(o.cM) ||
        !isPair(o.cN) ||
        typeof o.dist !== "number" ||
        typeof o.collided !== "boolean" ||
        !isOverlays(o.overlays)
    ) {
        return null;
    }
    return {
        type: "state",
        t: o.t,
        cM: o.cM,
        cN: o.cN,
        dist: o.dist,
        collided: o.collided,
        overlays: o.overlays as Overlays,
    };
}

export function velocityMessage(vx: number, vy: number): string {
    return JSON.stringify({ type: "velocity", vx, vy });
}

export function mechanismMessage(spec: MechanismSpec): string {
    return JSON.stringify({ type: "mechanism", spec });
}

export function resetMessage(cM: [number, number], cN: [number, number]): string {
    return JSON.stringify({ type: "reset", cM, cN });
}
