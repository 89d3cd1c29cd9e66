/** Pure projection of a service snapshot into what the page displays.
 *
 * The console never invents state: every field below is derived from the
 * latest snapshot (or marks the view disconnected when polls fail).
 */

import { Snapshot } from './types.js';

export type VehicularLamp = 'green' | 'yellow' | 'red';
export type PedestrianLamp = 'walk' | 'flashing' | 'dont_walk';

export interface PhaseLamps {
    phase: number;
    vehicular: VehicularLamp;
    pedestrian: PedestrianLamp;
}

export interface ViewModel {
    connected: boolean;
    sessionId: string | null;
    status: string;
    clientMode: string;
    walking: boolean;
    timeS: number;
    scenario: string;
    lamps: PhaseLamps[];
    /** Whole seconds of walk time left; null outside a WALK interval. */
    countdownS: number | null;
    selectedStreet: string | null;
    ticker: string[];
    trueDistanceM: number | null;
    measuredDistanceM: number | null;
}

const PED_LAMPS: Record<string, PedestrianLamp> = {
    WALK: 'walk',
    FLASHING_DONT_WALK: 'flashing',
    DONT_WALK: 'dont_walk',
};

export function vehicularLamp(snapshot: Snapshot, phase: number): VehicularLamp {
    if (snapshot.signal.active_phase !== phase) {
        return 'red';
    }
    if (snapshot.signal.interval === 'GREEN') {
        return 'green';
    }
    if (snapshot.signal.interval === 'YELLOW') {
        return 'yellow';
    }
    return 'red';
}

export function buildViewModel(snapshot: Snapshot): ViewModel {
    const phases = Object.keys(snapshot.signal.ped)
        .map(Number)
        .sort((a, b) => a - b);
    const lamps = phases.map((phase) => ({
        phase,
        vehicular: vehicularLamp(snapshot, phase),
        pedestrian: PED_LAMPS[snapshot.signal.ped[String(phase)]] ?? 'dont_walk',
    }));
    const anyWalk = lamps.some((l) => l.pedestrian === 'walk');
    return {
        connected: true,
        sessionId: snapshot.session_id,
        status: snapshot.status,
        clientMode: snapshot.client_mode,
        walking: snapshot.walking,
        timeS: snapshot.time_s,
        scenario: snapshot.scenario,
        lamps,
        countdownS: anyWalk ? Math.floor(snapshot.signal.remaining_walk_s + 1e-9) : null,
        selectedStreet: snapshot.selected_street,
        ticker: snapshot.announcements.map((a) => a.text),
        trueDistanceM: snapshot.pedestrian.true_fix?.distance_m ?? null,
        measuredDistanceM: snapshot.pedestrian.measured_fix?.distance_m ?? null,
    };
}

export function disconnectedView(previous: ViewModel | null): ViewModel {
    return {
        connected: false,
        sessionId: previous?.sessionId ?? null,
        status: previous?.status ?? 'UNKNOWN',
        clientMode: previous?.clientMode ?? 'UNKNOWN',
        walking: previous?.walking ?? false,
        timeS: previous?.timeS ?? 0,
        scenario: previous?.scenario ?? '',
        lamps: previous?.lamps ?? [],
        countdownS: null,
        selectedStreet: previous?.selectedStreet ?? null,
        ticker: previous?.ticker ?? [],
        trueDistanceM: previous?.trueDistanceM ?? null,
        measuredDistanceM: previous?.measuredDistanceM ?? null,
    };
}
