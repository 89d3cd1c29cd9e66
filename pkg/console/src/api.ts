/** Typed client for the session service HTTP API. */

import { ActionKind, AnnouncementRecord, SessionSummary, Snapshot } from './types.js';

export class ApiError extends Error {
    constructor(readonly status: number, message: string) {
        super(message);
    }
}

async function asJson<T>(resp: Response): Promise<T> {
    const body = await resp.json().catch(() => ({}));
    if (!resp.ok) {
        throw new ApiError(resp.status, (body as { error?: string }).error ?? resp.statusText);
    }
    return body as T;
}

export class ServiceClient {
    constructor(
        private readonly baseUrl: string = '',
        private readonly fetchFn: typeof fetch = fetch,
    ) {}

    private get(path: string): Promise<Response> {
        return this.fetchFn(`${this.baseUrl}${path}`);
    }

    private post(path: string, body?: unknown): Promise<Response> {
        return this.fetchFn(`${this.baseUrl}${path}`, {
            method: 'POST',
            headers: { 'Content-Type': 'application/json' },
            body: body === undefined ? '{}' : JSON.stringify(body),
        });
    }

    async sessions(): Promise<SessionSummary[]> {
        const body = await asJson<{ sessions: SessionSummary[] }>(await this.get('/api/sessions'));
        return body.sessions;
    }

    async createSession(scenario: unknown, speed = 1.0): Promise<SessionSummary> {
        const body = await asJson<{ session: SessionSummary }>(
            await this.post('/api/sessions', { scenario, speed }),
        );
        return body.session;
    }

    async snapshot(sessionId: string): Promise<Snapshot> {
        return asJson<Snapshot>(await this.get(`/api/sessions/${sessionId}/snapshot`));
    }

    async announcements(sessionId: string, limit?: number): Promise<AnnouncementRecord[]> {
        const qs = limit === undefined ? '' : `?limit=${limit}`;
        const body = await asJson<{ announcements: AnnouncementRecord[] }>(
            await this.get(`/api/sessions/${sessionId}/announcements${qs}`),
        );
        return body.announcements;
    }

    async start(sessionId: string): Promise<string> {
        const body = await asJson<{ status: string }>(
            await this.post(`/api/sessions/${sessionId}/start`),
        );
        return body.status;
    }

    async pause(sessionId: string): Promise<string> {
        const body = await asJson<{ status: string }>(
            await this.post(`/api/sessions/${sessionId}/pause`),
        );
        return body.status;
    }

    async reset(sessionId: string): Promise<string> {
        const body = await asJson<{ status: string }>(
            await this.post(`/api/sessions/${sessionId}/reset`),
        );
        return body.status;
    }

    /** Sends an action; retries once on network failure before giving up. */
    async sendAction(sessionId: string, kind: ActionKind): Promise<void> {
        const attempt = () =>
            this.post(`/api/sessions/${sessionId}/actions`, { kind }).then(asJson);
        try {
            await attempt();
        } catch (err) {
            if (err instanceof ApiError) {
                throw err; // the service understood us and said no
            }
            await attempt();
        }
    }
}
