/** Snapshot poller: fixed cadence, one request in flight, loss detection.
 *
 * After two consecutive failed polls the view flips to disconnected, so
 * the banner appears within two poll intervals of losing the service.
 */

import { Snapshot } from './types.js';
import { ViewModel, buildViewModel, disconnectedView } from './viewmodel.js';

export const POLL_INTERVAL_MS = 200; // 5 Hz
export const FAILURES_TO_DISCONNECT = 2;

export class Poller {
    private timer: ReturnType<typeof setInterval> | null = null;
    private inFlight = false;
    private failures = 0;
    private lastView: ViewModel | null = null;

    constructor(
        private readonly fetchSnapshot: () => Promise<Snapshot>,
        private readonly onUpdate: (view: ViewModel) => void,
        private readonly intervalMs: number = POLL_INTERVAL_MS,
    ) {}

    start(): void {
        if (this.timer !== null) {
            return;
        }
        void this.pollOnce();
        this.timer = setInterval(() => void this.pollOnce(), this.intervalMs);
    }

    stop(): void {
        if (this.timer !== null) {
            clearInterval(this.timer);
            this.timer = null;
        }
    }

    async pollOnce(): Promise<void> {
        if (this.inFlight) {
            return;
        }
        this.inFlight = true;
        try {
            const snapshot = await this.fetchSnapshot();
            this.failures = 0;
            this.lastView = buildViewModel(snapshot);
            this.onUpdate(this.lastView);
        } catch {
            this.failures += 1;
            if (this.failures >= FAILURES_TO_DISCONNECT) {
                this.onUpdate(disconnectedView(this.lastView));
            }
        } finally {
            this.inFlight = false;
        }
    }
}
