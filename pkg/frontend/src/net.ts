// Thin websocket client: decode + validate frames, reconnect with backoff.
// Malformed frames are skipped (logged once); state handling stays in the
// caller's callback.

import { parseServerFrame, ServerFrame } from "./protocol.js";

export class SandboxClient {
    private ws: WebSocket | null = null;
    private warnedOnce = false;
    private closed = false;

    constructor(
        private url: string,
        private onFrame: (f: ServerFrame) => void,
        private onStatus: (connected: boolean) => void,
    ) {}

    connect(): void {
        if (this.closed) return;
        const ws = new WebSocket(this.url);
        this.ws = ws;
        ws.onopen = () => this.onStatus(true);
        ws.onmessage = (ev) => {
            let raw: unknown;
            try {
                raw = JSON.parse(ev.data as string);
            } catch {
                this.warnMalformed();
                return;
            }
            const frame = parseServerFrame(raw);
            if (frame === null) {
                this.warnMalformed();
                return;
            }
            this.onFrame(frame);
        };
        ws.onclose = () => {
            this.onStatus(false);
            this.ws = null;
            if (!this.closed) {
                setTimeout(() => this.connect(), 700);
            }
        };
        ws.onerror = () => ws.close();
    }

    private warnMalformed(): void {
        if (!this.warnedOnce) {
            console.warn("fibersim: skipping malformed server frame(s)");
            this.warnedOnce = true;
        }
    }

    send(text: string): boolean {
        if (this.ws !== null && this.ws.readyState === WebSocket.OPEN) {
            this.ws.send(text);
            return true;
        }
        return false;
    }

    close(): void {
        this.closed = true;
        this.ws?.close();
    }
}
