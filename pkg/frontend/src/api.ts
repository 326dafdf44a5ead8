// Thin fetch client for the session service. The base URL is configurable so
// the static bundle can run against any host.

import type { StateDoc } from "./model.js";

export type StepAction =
  | { action: "task"; constraint: string; polarity: "satisfy" | "unsatisfy" }
  | { action: "assign"; variable: string; value: string }
  | { action: "complete"; mode: "first" | "all" }
  | { action: "undo" };

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class SessionApi {
  constructor(readonly baseUrl: string = "") {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        detail = JSON.stringify(body.detail ?? body);
      } catch {
        // keep the status text
      }
      throw new ApiError(detail, response.status);
    }
    return response.json();
  }

  async createSession(problemText: string): Promise<string> {
    const body = (await this.request("/sessions", {
      method: "POST",
      headers: { "Content-Type": "text/plain" },
      body: problemText,
    })) as { id: string };
    return body.id;
  }

  getState(sessionId: string): Promise<StateDoc> {
    return this.request(`/sessions/${sessionId}/state`) as Promise<StateDoc>;
  }

  applyStep(sessionId: string, action: StepAction): Promise<StateDoc> {
    return this.request(`/sessions/${sessionId}/steps`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(action),
    }) as Promise<StateDoc>;
  }

  async deleteSession(sessionId: string): Promise<void> {
    await this.request(`/sessions/${sessionId}`, { method: "DELETE" });
  }

  async fetchFixture(name: string): Promise<string> {
    const response = await fetch(`${this.baseUrl}/fixtures/${name}`);
    if (!response.ok) throw new ApiError(response.statusText, response.status);
    return response.text();
  }
}
