// Mechanism panel logic: turn a selection plus slider values into a wire
// spec, rejecting out-of-range parameters before anything reaches the
// server.

import { MechanismSpec } from "./protocol.js";

export type PanelKind = "copy" | "damped" | "radial" | "orbit" | "linear_const" | "copy+pushing";

export const PANEL_KINDS: PanelKind[] = [
    "copy",
    "damped",
    "radial",
    "orbit",
    "linear_const",
    "copy+pushing",
];

export const PARAM_RANGES: Record<string, [number, number]> = {
    lambda: [-2.0, 2.0],
    mu: [-3.0, 3.0],
    alpha: [-3.0, 3.0],
    beta: [-3.0, 3.0],
};

function checkRange(name: string, value: number): number {
    const [lo, hi] = PARAM_RANGES[name];
    if (!Number.isFinite(value) || value < lo || value > hi) {
        throw new RangeError(`${name} must be in [${lo}, ${hi}]`);
    }
    return value;
}

export interface PanelParams {
    lambda?: number;
    mu?: number;
    alpha?: number;
    beta?: number;
}

export function buildMechanismSpec(kind: PanelKind, params: PanelParams = {}): MechanismSpec {
    switch (kind) {
        case "copy":
            return { type: "copy" };
        case "damped":
            return { type: "damped" };
        case "radial":
            return { type: "radial", lambda: checkRange("lambda", params.lambda ?? 0) };
        case "orbit":
            return { type: "orbit", mu: checkRange("mu", params.mu ?? 0) };
        case "linear_const": {
            const alpha = checkRange("alpha", params.alpha ?? 1);
            const beta = checkRange("beta", params.beta ?? 0);
            if (alpha === 0 && beta === 0) {
                throw new RangeError("alpha and beta cannot both be zero");
            }
            return { type: "linear_const", alpha, beta };
        }
        case "copy+pushing":
            return { type: "composite", base: { type: "copy" }, forms: [{ type: "pushing" }] };
    }
}

/** Which sliders a given selection needs. */
export function activeParams(kind: PanelKind): string[] {
    switch (kind) {
        case "radial":
            return ["lambda"];
        case "orbit":
            return ["mu"];
        case "linear_const":
            return ["alpha", "beta"];
        default:
            return [];
    }
}
