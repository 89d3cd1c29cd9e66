import { describe, expect, it } from 'vitest';

import { buildViewModel, disconnectedView } from '../src/viewmodel.js';
import { makeSnapshot } from './helpers.js';

describe('buildViewModel', () => {
    it('lights the walking person for the WALK phase', () => {
        const vm = buildViewModel(makeSnapshot({
            signal: {
                active_phase: 2,
                interval: 'GREEN',
                ped: { '1': 'DONT_WALK', '2': 'WALK' },
                remaining_walk_s: 6.4,
            },
        }));
        expect(vm.lamps).toEqual([
            { phase: 1, vehicular: 'red', pedestrian: 'dont_walk' },
            { phase: 2, vehicular: 'green', pedestrian: 'walk' },
        ]);
        expect(vm.countdownS).toBe(6);
    });

    it('maps flashing clearance to the flashing hand', () => {
        const vm = buildViewModel(makeSnapshot({
            signal: {
                active_phase: 2,
                interval: 'GREEN',
                ped: { '1': 'DONT_WALK', '2': 'FLASHING_DONT_WALK' },
                remaining_walk_s: 0.0,
            },
        }));
        expect(vm.lamps[1].pedestrian).toBe('flashing');
        expect(vm.countdownS).toBeNull();
    });

    it('yellow interval shows yellow only on the active phase', () => {
        const vm = buildViewModel(makeSnapshot({
            signal: {
                active_phase: 1,
                interval: 'YELLOW',
                ped: { '1': 'DONT_WALK', '2': 'DONT_WALK' },
                remaining_walk_s: 0,
            },
        }));
        expect(vm.lamps.map((l) => l.vehicular)).toEqual(['yellow', 'red']);
    });

    it('all-red shows red everywhere', () => {
        const vm = buildViewModel(makeSnapshot({
            signal: {
                active_phase: 1,
                interval: 'ALL_RED',
                ped: { '1': 'DONT_WALK', '2': 'DONT_WALK' },
                remaining_walk_s: 0,
            },
        }));
        expect(vm.lamps.map((l) => l.vehicular)).toEqual(['red', 'red']);
    });

    it('projects only snapshot data, never invented state', () => {
        const snapshot = makeSnapshot({
            announcements: [
                { t: 1.0, kind: 'DISTANCE', text: 'Crossing in 400 meters.', payload: {} },
            ],
            selected_street: 'East St',
        });
        const vm = buildViewModel(snapshot);
        expect(vm.ticker).toEqual(['Crossing in 400 meters.']);
        expect(vm.selectedStreet).toBe('East St');
        expect(vm.timeS).toBe(snapshot.time_s);
        expect(vm.trueDistanceM).toBe(44.4);
        expect(vm.measuredDistanceM).toBe(41.1);
        expect(vm.connected).toBe(true);
    });
});

describe('disconnectedView', () => {
    it('keeps the last view but flags the loss', () => {
        const last = buildViewModel(makeSnapshot());
        const vm = disconnectedView(last);
        expect(vm.connected).toBe(false);
        expect(vm.lamps).toEqual(last.lamps);
        expect(vm.scenario).toBe(last.scenario);
    });

    it('renders an empty disconnected view with no history', () => {
        const vm = disconnectedView(null);
        expect(vm.connected).toBe(false);
        expect(vm.lamps).toEqual([]);
    });
});
