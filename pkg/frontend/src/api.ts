/**
 * Typed client for the game service.
 *
 * Every response body is screened before it reaches the UI: a payload
 * carrying answer fields is rejected outright, so correctness marks can
 * only ever come from the server.  Mutations flow through a queue that
 * keeps at most one request in flight at a time.
 */

import type {
  CreatedSession,
  HealthDoc,
  LeaderboardDoc,
  PlayerView,
  ScoreReportDoc,
  SessionSummary,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly machineCode: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

const ANSWER_KEYS = new Set(["answers", "answer_lemmas"]);

/** Reject any payload that carries answer data, however deeply nested. */
export function assertNoAnswerData(payload: unknown): void {
  if (Array.isArray(payload)) {
    for (const item of payload) assertNoAnswerData(item);
    return;
  }
  if (payload !== null && typeof payload === "object") {
    for (const [key, value] of Object.entries(payload)) {
      if (ANSWER_KEYS.has(key)) {
        throw new ApiError("AnswerLeak", `response carries answer field ${key}`, 0);
      }
      assertNoAnswerData(value);
    }
  }
}

export class ApiClient {
  private fetchFn: typeof fetch;
  private queue: Promise<unknown> = Promise.resolve();

  constructor(
    private baseUrl: string,
    fetchFn?: typeof fetch,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchFn(this.baseUrl + path, init);
    let data: unknown = null;
    try {
      data = await res.json();
    } catch {
      data = null;
    }
    if (!res.ok) {
      const err = (data as { error?: { code?: string; message?: string } } | null)?.error;
      throw new ApiError(err?.code ?? "HttpError", err?.message ?? res.statusText, res.status);
    }
    assertNoAnswerData(data);
    return data as T;
  }

  /** Run `work` after every earlier mutation has settled. */
  private enqueue<T>(work: () => Promise<T>): Promise<T> {
    const next = this.queue.then(work, work);
    this.queue = next.then(
      () => undefined,
      () => undefined,
    );
    return next;
  }

  health(): Promise<HealthDoc> {
    return this.request("GET", "/v1/health");
  }

  createSession(player: string, seed?: string): Promise<CreatedSession> {
    const body = seed === undefined ? { player } : { player, seed };
    return this.enqueue(() => this.request("POST", "/v1/sessions", body));
  }

  getSession(sessionId: string): Promise<SessionSummary> {
    return this.request("GET", `/v1/sessions/${encodeURIComponent(sessionId)}`);
  }

  getPuzzle(sessionId: string): Promise<PlayerView> {
    return this.request("GET", `/v1/sessions/${encodeURIComponent(sessionId)}/puzzle`);
  }

  place(sessionId: string, slotId: string, term: string): Promise<PlayerView> {
    const path = `/v1/sessions/${encodeURIComponent(sessionId)}/placements/${encodeURIComponent(slotId)}`;
    return this.enqueue(() => this.request("PUT", path, { term }));
  }

  unplace(sessionId: string, slotId: string): Promise<PlayerView> {
    const path = `/v1/sessions/${encodeURIComponent(sessionId)}/placements/${encodeURIComponent(slotId)}`;
    return this.enqueue(() => this.request("DELETE", path));
  }

  submit(sessionId: string): Promise<ScoreReportDoc> {
    return this.enqueue(() =>
      this.request("POST", `/v1/sessions/${encodeURIComponent(sessionId)}/submit`),
    );
  }

  advance(sessionId: string): Promise<PlayerView> {
    return this.enqueue(() =>
      this.request("POST", `/v1/sessions/${encodeURIComponent(sessionId)}/advance`),
    );
  }

  leaderboard(limit?: number): Promise<LeaderboardDoc> {
    const query = limit === undefined ? "" : `?limit=${limit}`;
    return this.request("GET", `/v1/leaderboard${query}`);
  }
}
