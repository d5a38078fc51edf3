// Human input -> obstacle velocity. Pointer mode chases the pointer with a
// proportional gain; keyboard mode uses arrow-key unit directions. Both are
// clamped to the server's speed limit, and the caller emits at most one
// velocity message per animation frame (no input means a zero heartbeat).

export interface Vec {
    x: number;
    y: number;
}

export const POINTER_GAIN = 2.0; // (m/s) per meter of pointer offset

export function clampToMax(v: Vec, vmax: number): Vec {
    const speed = Math.hypot(v.x, v.y);
    if (speed <= vmax || speed === 0) return v;
    const s = vmax / speed;
    return { x: v.x * s, y: v.y * s };
}

export function pointerToVelocity(pointerWorld: Vec, cN: Vec, vmax: number): Vec {
    return clampToMax(
        {
            x: POINTER_GAIN * (pointerWorld.x - cN.x),
            y: POINTER_GAIN * (pointerWorld.y - cN.y),
        },
        vmax,
    );
}

export function keysToVelocity(keys: ReadonlySet<string>, vmax: number): Vec {
    let x = 0;
    let y = 0;
    if (keys.has("ArrowLeft")) x -= 1;
    if (keys.has("ArrowRight")) x += 1;
    if (keys.has("ArrowDown")) y -= 1;
    if (keys.has("ArrowUp")) y += 1;
    const n = Math.hypot(x, y);
    if (n === 0) return { x: 0, y: 0 };
    return { x: (x / n) * vmax, y: (y / n) * vmax };
}
