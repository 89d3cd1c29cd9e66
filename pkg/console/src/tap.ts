/** Press-duration classification: the tap surface's only job.
 *
 * Presses shorter than the threshold cycle crossing options (SHORT_TAP);
 * presses at or past it place the crossing call (LONG_TAP). Every gesture
 * maps to exactly one action.
 */

import { ActionKind } from './types.js';

export const LONG_PRESS_THRESHOLD_MS = 600;

export function classifyPress(durationMs: number): ActionKind {
    if (durationMs < 0 || !Number.isFinite(durationMs)) {
        throw new Error(`bad press duration ${durationMs}`);
    }
    return durationMs < LONG_PRESS_THRESHOLD_MS ? 'SHORT_TAP' : 'LONG_TAP';
}

export class TapTracker {
    private downAtMs: number | null = null;

    constructor(
        private readonly send: (kind: ActionKind) => void,
        private readonly enabled: () => boolean = () => true,
        private readonly now: () => number = () => performance.now(),
    ) {}

    pressStart(): void {
        if (!this.enabled()) {
            return;
        }
        this.downAtMs = this.now();
    }

    /** Returns the emitted action, or null for ignored/disabled gestures. */
    pressEnd(): ActionKind | null {
        if (this.downAtMs === null || !this.enabled()) {
            this.downAtMs = null;
            return null;
        }
        const kind = classifyPress(this.now() - this.downAtMs);
        this.downAtMs = null;
        this.send(kind);
        return kind;
    }

    cancel(): void {
        this.downAtMs = null;
    }
}
