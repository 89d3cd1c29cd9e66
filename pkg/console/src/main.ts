/** Page wiring: find the hosted session, poll it, and forward gestures. */

import { ServiceClient } from './api.js';
import { Poller } from './poller.js';
import { renderViewModel } from './render.js';
import { TapTracker } from './tap.js';
import { ViewModel } from './viewmodel.js';

function toast(root: HTMLElement, message: string): void {
    const el = root.querySelector<HTMLElement>('[data-testid="toast"]');
    if (el) {
        el.textContent = message;
        el.style.display = message ? 'block' : 'none';
        if (message) {
            setTimeout(() => {
                el.textContent = '';
                el.style.display = 'none';
            }, 4000);
        }
    }
}

export async function boot(root: HTMLElement, client = new ServiceClient()): Promise<void> {
    const sessions = await client.sessions();
    if (sessions.length === 0) {
        toast(root, 'no session hosted; start the service with a scenario');
        return;
    }
    const sessionId = sessions[0].id;
    let latest: ViewModel | null = null;

    const poller = new Poller(
        () => client.snapshot(sessionId),
        (vm) => {
            latest = vm;
            renderViewModel(root, vm);
        },
    );
    poller.start();

    const act = (fn: () => Promise<unknown>) => () =>
        fn().catch((err) => toast(root, String(err)));

    bind(root, 'start', act(() => client.start(sessionId)));
    bind(root, 'pause', act(() => client.pause(sessionId)));
    bind(root, 'reset', act(() => client.reset(sessionId)));
    bind(root, 'walk-toggle', act(() => client.sendAction(sessionId, 'WALK_TOGGLE')));

    const tap = new TapTracker(
        (kind) =>
            void client
                .sendAction(sessionId, kind)
                .catch((err) => toast(root, String(err))),
        () => latest === null || latest.status !== 'FINISHED',
    );
    const surface = root.querySelector<HTMLElement>('[data-testid="tap"]');
    if (surface) {
        surface.addEventListener('pointerdown', () => tap.pressStart());
        surface.addEventListener('pointerup', () => tap.pressEnd());
        surface.addEventListener('pointerleave', () => tap.cancel());
    }
}

function bind(root: HTMLElement, testid: string, handler: () => void): void {
    root
        .querySelector<HTMLElement>(`[data-testid="${testid}"]`)
        ?.addEventListener('click', handler);
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
    void boot(document.getElementById('app') as HTMLElement);
}
