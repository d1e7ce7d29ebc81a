/** Thin typed client over the game service HTTP API.
 *
 * The transport is injectable so tests can drive the UI against a fake
 * server; the default is window.fetch against a same-origin base URL.
 */

import type { JobView, OverlayRaster, PresetConfig, SessionState } from "./types";

export type Transport = (
  path: string,
  init?: { method?: string; body?: unknown },
) => Promise<{ status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export function fetchTransport(baseUrl = ""): Transport {
  return async (path, init) => {
    const resp = await fetch(baseUrl + path, {
      method: init?.method ?? "GET",
      headers: init?.body !== undefined ? { "content-type": "application/json" } : undefined,
      body: init?.body !== undefined ? JSON.stringify(init.body) : undefined,
    });
    return { status: resp.status, json: () => resp.json() };
  };
}

export class GameApi {
  constructor(private readonly transport: Transport) {}

  private async call<T>(path: string, init?: { method?: string; body?: unknown }): Promise<T> {
    const resp = await this.transport(path, init);
    if (resp.status >= 400) {
      let detail = `HTTP ${resp.status}`;
      try {
        const data = (await resp.json()) as { detail?: string };
        if (data && data.detail) detail = `${detail}: ${data.detail}`;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  createSession(): Promise<SessionState> {
    return this.call("/sessions", { method: "POST", body: {} });
  }

  getSession(id: string): Promise<SessionState> {
    return this.call(`/sessions/${id}`);
  }

  addPoint(id: string, x: number, y: number): Promise<SessionState> {
    return this.call(`/sessions/${id}/points`, { method: "POST", body: { x, y } });
  }

  removePoint(id: string, index: number): Promise<SessionState> {
    return this.call(`/sessions/${id}/points/${index}`, { method: "DELETE" });
  }

  submitSolve(
    id: string,
    mode: "free" | "handicap",
    budget?: number,
    seed?: number,
  ): Promise<{ job_id: string }> {
    return this.call(`/sessions/${id}/solve`, {
      method: "POST",
      body: { mode, budget: budget ?? 1000, seed: seed ?? 0 },
    });
  }

  pollJob(jobId: string): Promise<JobView> {
    return this.call(`/jobs/${jobId}`);
  }

  cancelJob(jobId: string): Promise<{ id: string; status: string }> {
    return this.call(`/jobs/${jobId}/cancel`, { method: "POST" });
  }

  preset55(): Promise<PresetConfig> {
    return this.call("/presets/fig1-55");
  }

  overlay(
    id: string,
    t: [number, number],
    bbox: [number, number, number, number],
    res: number,
  ): Promise<OverlayRaster> {
    const params = `mode=handicap&t=${t[0]},${t[1]}&bbox=${bbox.join(",")}&res=${res}`;
    return this.call(`/sessions/${id}/overlay?${params}`);
  }
}
