// Typed client over the session API. Every method either returns the parsed
// payload or throws ApiFailure carrying the server's error code verbatim.

import { ApiError, CircuitJson, Decomposition, OpJson, VerifyResult } from "./types.js";

export class ApiFailure extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init);
  const text = await resp.text();
  if (!resp.ok) {
    let code = `HTTP${resp.status}`;
    let message = text;
    try {
      const body = JSON.parse(text) as ApiError;
      if (body.error) {
        code = body.error;
        message = body.message;
      }
    } catch {
      // non-JSON error body; keep the raw text
    }
    throw new ApiFailure(code, message, resp.status);
  }
  return JSON.parse(text) as T;
}

export class ApiClient {
  constructor(public readonly base: string) {}

  createSession(modes: string[]): Promise<{ id: string; state: Decomposition }> {
    return request(`${this.base}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ modes }),
    });
  }

  createFromCircuit(circuit: CircuitJson): Promise<{ id: string; state: Decomposition }> {
    return request(`${this.base}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ circuit }),
    });
  }

  getState(id: string): Promise<Decomposition> {
    return request(`${this.base}/sessions/${id}/state`);
  }

  applyOp(id: string, op: OpJson): Promise<Decomposition> {
    return request(`${this.base}/sessions/${id}/ops`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(op),
    });
  }

  undo(id: string): Promise<Decomposition> {
    return request(`${this.base}/sessions/${id}/undo`, { method: "POST" });
  }

  verify(id: string, r: number, cutoff: number): Promise<VerifyResult> {
    return request(`${this.base}/sessions/${id}/verify`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ r, cutoff }),
    });
  }

  async exportText(id: string, format: "dot" | "circuit" | "state"): Promise<string> {
    const resp = await fetch(`${this.base}/sessions/${id}/export?format=${format}`);
    if (!resp.ok) {
      const body = (await resp.json()) as ApiError;
      throw new ApiFailure(body.error, body.message, resp.status);
    }
    return resp.text();
  }
}
