import { Snapshot } from '../src/types.js';

export function makeSnapshot(overrides: Partial<Snapshot> = {}): Snapshot {
    return {
        session_id: 's1',
        status: 'RUNNING',
        mode: 'INTERACTIVE',
        speed: 1.0,
        time_s: 12.3,
        scenario: 'demo',
        client_mode: 'APPROACHING',
        walking: true,
        pedestrian: {
            lat: 40.7428,
            lon: -74.179,
            true_fix: { lat: 40.7428, lon: -74.179, distance_m: 44.4 },
            measured_fix: { lat: 40.7428, lon: -74.179, distance_m: 41.1 },
        },
        signal: {
            active_phase: 1,
            interval: 'GREEN',
            ped: { '1': 'DONT_WALK', '2': 'DONT_WALK' },
            remaining_walk_s: 0.0,
        },
        announcements: [],
        selected_street: null,
        ...overrides,
    };
}
