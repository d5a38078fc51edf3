// World <-> screen mapping: fixed scale at session start, pan/zoom after.
// World y points up; screen y points down.

import { Vec } from "./input.js";

export class Camera {
    constructor(
        public centerX = 0,
        public centerY = 0,
        public pixelsPerMeter = 60,
        public width = 800,
        public height = 600,
    ) {}

    worldToScreen(p: Vec): Vec {
        return {
            x: this.width / 2 + (p.x - this.centerX) * this.pixelsPerMeter,
            y: this.height / 2 - (p.y - this.centerY) * this.pixelsPerMeter,
        };
    }

    screenToWorld(p: Vec): Vec {
        return {
            x: this.centerX + (p.x - this.width / 2) / this.pixelsPerMeter,
            y: this.centerY - (p.y - this.height / 2) / this.pixelsPerMeter,
        };
    }

    /** Zoom by a factor while keeping the screen point `anchor` fixed. */
    zoom(factor: number, anchor: Vec): void {
        const before = this.screenToWorld(anchor);
        this.pixelsPerMeter = Math.min(600, Math.max(6, this.pixelsPerMeter * factor));
        const after = this.screenToWorld(anchor);
        this.centerX += before.x - after.x;
        this.centerY += before.y - after.y;
    }

    panByScreen(dx: number, dy: number): void {
        this.centerX -= dx / this.pixelsPerMeter;
        this.centerY += dy / this.pixelsPerMeter;
    }
}
