/** Wire shapes exchanged with the session service. */

export interface AnnouncementRecord {
    t: number;
    kind: string;
    text: string;
    payload: Record<string, unknown>;
}

export interface SignalState {
    active_phase: number;
    interval: 'GREEN' | 'YELLOW' | 'ALL_RED';
    ped: Record<string, 'WALK' | 'FLASHING_DONT_WALK' | 'DONT_WALK'>;
    remaining_walk_s: number;
}

export interface PedestrianState {
    lat: number;
    lon: number;
    true_fix: { lat: number; lon: number; distance_m: number } | null;
    measured_fix: { lat: number; lon: number; distance_m: number } | null;
}

export interface Snapshot {
    session_id: string;
    status: 'READY' | 'RUNNING' | 'PAUSED' | 'FINISHED';
    mode: string;
    speed: number;
    time_s: number;
    scenario: string;
    client_mode: string;
    walking: boolean;
    pedestrian: PedestrianState;
    signal: SignalState;
    announcements: AnnouncementRecord[];
    selected_street: string | null;
}

export type ActionKind = 'SHORT_TAP' | 'LONG_TAP' | 'WALK_TOGGLE' | 'RESET';

export interface SessionSummary {
    id: string;
    scenario: string;
    mode: string;
    status: string;
    speed: number;
}
