/** Thin typed client for the session endpoints; no engine logic here. */

import type { Answer, CreateSessionRequest, SessionView } from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: unknown,
  ) {
    super(typeof detail === "string" ? detail : `HTTP ${status}`);
    this.name = "ApiError";
  }
}

async function errorDetail(response: Response): Promise<unknown> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    return body.detail ?? body;
  } catch {
    return response.statusText;
  }
}

export class SessionApi {
  private readonly base: string;

  constructor(
    baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {
    this.base = baseUrl.replace(/\/+$/, "");
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    return response;
  }

  private async requestJson(
    path: string,
    init?: RequestInit,
  ): Promise<SessionView> {
    const response = await this.request(path, init);
    return (await response.json()) as SessionView;
  }

  createSession(request: CreateSessionRequest): Promise<SessionView> {
    return this.requestJson("/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
  }

  getView(sessionId: string): Promise<SessionView> {
    return this.requestJson(`/sessions/${encodeURIComponent(sessionId)}`);
  }

  postAnswer(
    sessionId: string,
    queryId: string,
    answer: Answer,
  ): Promise<SessionView> {
    return this.requestJson(
      `/sessions/${encodeURIComponent(sessionId)}/answers`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ query_id: queryId, answer }),
      },
    );
  }

  async getTranscript(sessionId: string): Promise<string> {
    const response = await this.request(
      `/sessions/${encodeURIComponent(sessionId)}/transcript`,
    );
    return response.text();
  }

  abort(sessionId: string): Promise<SessionView> {
    return this.requestJson(`/sessions/${encodeURIComponent(sessionId)}`, {
      method: "DELETE",
    });
  }
}
