// @vitest-environment jsdom
//
// Signal-head conformance: for 100 consecutive polls of an evolving
// session, the rendered head must equal the polled snapshot exactly.
import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import { describe, expect, it } from 'vitest';

import { Poller } from '../src/poller.js';
import { renderViewModel } from '../src/render.js';
import { Snapshot } from '../src/types.js';
import { makeSnapshot } from './helpers.js';

const pageHtml = readFileSync(
    join(dirname(fileURLToPath(import.meta.url)), '..', 'index.html'),
    'utf-8',
);

const PED_TO_DATASET: Record<string, string> = {
    WALK: 'walk',
    FLASHING_DONT_WALK: 'flashing',
    DONT_WALK: 'dont_walk',
};

/** A plausible controller trace: green/yellow/all-red with one walk service. */
function* signalTrace(): Generator<Snapshot['signal']> {
    let t = 0;
    for (;;) {
        const inCycle = t % 60;
        let signal: Snapshot['signal'];
        if (inCycle < 18) {
            signal = {
                active_phase: 1,
                interval: 'GREEN',
                ped: {
                    '1': inCycle < 7 ? 'WALK' : 'FLASHING_DONT_WALK',
                    '2': 'DONT_WALK',
                },
                remaining_walk_s: inCycle < 7 ? 7 - inCycle : 0,
            };
        } else if (inCycle < 21) {
            signal = { active_phase: 1, interval: 'YELLOW',
                       ped: { '1': 'DONT_WALK', '2': 'DONT_WALK' }, remaining_walk_s: 0 };
        } else if (inCycle < 23) {
            signal = { active_phase: 1, interval: 'ALL_RED',
                       ped: { '1': 'DONT_WALK', '2': 'DONT_WALK' }, remaining_walk_s: 0 };
        } else if (inCycle < 33) {
            signal = { active_phase: 2, interval: 'GREEN',
                       ped: { '1': 'DONT_WALK', '2': 'DONT_WALK' }, remaining_walk_s: 0 };
        } else if (inCycle < 36) {
            signal = { active_phase: 2, interval: 'YELLOW',
                       ped: { '1': 'DONT_WALK', '2': 'DONT_WALK' }, remaining_walk_s: 0 };
        } else if (inCycle < 38) {
            signal = { active_phase: 2, interval: 'ALL_RED',
                       ped: { '1': 'DONT_WALK', '2': 'DONT_WALK' }, remaining_walk_s: 0 };
        } else {
            signal = { active_phase: 1, interval: 'GREEN',
                       ped: { '1': 'DONT_WALK', '2': 'DONT_WALK' }, remaining_walk_s: 0 };
        }
        yield signal;
        t += 1;
    }
}

describe('signal head conformance', () => {
    it('rendered head equals the polled snapshot for 100 consecutive polls', async () => {
        const body = pageHtml.match(/<body>([\s\S]*)<\/body>/)![1]
            .replace(/<script[\s\S]*?<\/script>/, '');
        document.body.innerHTML = body;
        const root = document.getElementById('app') as HTMLElement;

        const trace = signalTrace();
        let tick = 0;
        let current: Snapshot = makeSnapshot();
        const poller = new Poller(
            async () => {
                tick += 1;
                current = makeSnapshot({
                    time_s: tick,
                    signal: trace.next().value,
                });
                return current;
            },
            (vm) => renderViewModel(root, vm),
            1,
        );

        for (let i = 0; i < 100; i += 1) {
            await poller.pollOnce();
            for (const phase of [1, 2]) {
                const el = root.querySelector<HTMLElement>(`[data-testid="phase-${phase}"]`)!;
                const expectedPed = PED_TO_DATASET[current.signal.ped[String(phase)]];
                expect(el.dataset.pedestrian, `poll ${i} phase ${phase}`).toBe(expectedPed);
                const expectedVehicular =
                    current.signal.active_phase !== phase ? 'red'
                    : current.signal.interval === 'GREEN' ? 'green'
                    : current.signal.interval === 'YELLOW' ? 'yellow' : 'red';
                expect(el.dataset.vehicular, `poll ${i} phase ${phase}`).toBe(expectedVehicular);
            }
            const countdown = root.querySelector('[data-testid="countdown"]')!.textContent;
            const anyWalk = Object.values(current.signal.ped).includes('WALK');
            expect(countdown).toBe(
                anyWalk ? String(Math.floor(current.signal.remaining_walk_s + 1e-9)) : '',
            );
        }
    });
});
