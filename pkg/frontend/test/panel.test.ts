import { describe, expect, it } from "vitest";

import { activeParams, buildMechanismSpec } from "../src/panel.js";

describe("buildMechanismSpec", () => {
    it("builds parameterless specs", () => {
        expect(buildMechanismSpec("copy")).toEqual({ type: "copy" });
        expect(buildMechanismSpec("damped")).toEqual({ type: "damped" });
        expect(buildMechanismSpec("copy+pushing")).toEqual({
            type: "composite",
            base: { type: "copy" },
            forms: [{ type: "pushing" }],
        });
    });

    it("builds parametrized specs", () => {
        expect(buildMechanismSpec("radial", { lambda: -0.5 })).toEqual({
            type: "radial",
            lambda: -0.5,
        });
        expect(buildMechanismSpec("orbit", { mu: 1.5 })).toEqual({ type: "orbit", mu: 1.5 });
        expect(buildMechanismSpec("linear_const", { alpha: 2, beta: 0 })).toEqual({
            type: "linear_const",
            alpha: 2,
            beta: 0,
        });
    });

    it("rejects out-of-range parameters client-side", () => {
        expect(() => buildMechanismSpec("radial", { lambda: 2.5 })).toThrow(RangeError);
        expect(() => buildMechanismSpec("orbit", { mu: -9 })).toThrow(RangeError);
        expect(() => buildMechanismSpec("linear_const", { alpha: 4, beta: 0 })).toThrow(RangeError);
        expect(() => buildMechanismSpec("linear_const", { alpha: 0, beta: 0 })).toThrow(
            /both be zero/,
        );
        expect(() => buildMechanismSpec("radial", { lambda: Number.NaN })).toThrow(RangeError);
    });

    it("lists the sliders each selection needs", () => {
        expect(activeParams("copy")).toEqual([]);
        expect(activeParams("radial")).toEqual(["lambda"]);
        expect(activeParams("linear_const")).toEqual(["alpha", "beta"]);
    });
});
