// Thin typed client for the mission HTTP API. Every mutation in the app
// goes through these calls.

import type {
  JobDoc,
  MissionRecordDoc,
  MissionSummary,
  PlanDoc,
  SliceDoc,
  SweepDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const res = await fetch(url, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  if (!res.ok) {
    let detail = res.statusText;
    try {
      const body = await res.json();
      detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
    } catch {
      // keep statusText
    }
    throw new ApiError(res.status, detail);
  }
  return (await res.json()) as T;
}

export class MissionApi {
  constructor(private base: string = "") {}

  listMissions(): Promise<MissionSummary[]> {
    return request(`${this.base}/missions`);
  }

  getMission(id: string): Promise<MissionRecordDoc> {
    return request(`${this.base}/missions/${id}`);
  }

  createMission(definition: Record<string, unknown>): Promise<MissionRecordDoc> {
    return request(`${this.base}/missions`, {
      method: "POST",
      body: JSON.stringify({ definition }),
    });
  }

  getPlan(id: string, index: number): Promise<PlanDoc> {
    return request(`${this.base}/missions/${id}/plans/${index}`);
  }

  runPlan(
    id: string,
    opts: { kind?: string; t_depart?: number; background?: boolean } = {}
  ): Promise<{ job?: string; mission?: MissionRecordDoc; plan_index?: number }> {
    return request(`${this.base}/missions/${id}/plan`, {
      method: "POST",
      body: JSON.stringify(opts),
    });
  }

  launchWindow(
    id: string,
    t0: number,
    t1: number,
    stepS: number
  ): Promise<SweepDoc> {
    return request(`${this.base}/missions/${id}/launch-window`, {
      method: "POST",
      body: JSON.stringify({ t0, t1, step_s: stepS }),
    });
  }

  submitStateAndReplan(
    id: string,
    state: { timestamp: number; lat: number; lon: number; alt: number; soc: number },
    weatherRef?: string
  ): Promise<{ mission: MissionRecordDoc; plan_index: number }> {
    return request(`${this.base}/missions/${id}/state`, {
      method: "POST",
      body: JSON.stringify({ state, weather_ref: weatherRef }),
    });
  }

  weatherSlice(
    ref: string,
    field: string,
    time: number,
    alt?: number | null,
    stride = 1
  ): Promise<SliceDoc> {
    const params = new URLSearchParams({
      field,
      time: String(time),
      stride: String(stride),
    });
    if (alt !== undefined && alt !== null) {
      params.set("alt", String(alt));
    }
    return request(`${this.base}/weather/${ref}/slice?${params}`);
  }

  job(id: string): Promise<JobDoc> {
    return request(`${this.base}/jobs/${id}`);
  }

  async pollJob(id: string, intervalMs = 500, timeoutMs = 600_000): Promise<JobDoc> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const doc = await this.job(id);
      if (doc.status === "done" || doc.status === "error") {
        return doc;
      }
      if (Date.now() > deadline) {
        throw new ApiError(408, `job ${id} timed out`);
      }
      await new Promise((r) => setTimeout(r, intervalMs));
    }
  }
}
