// HTTP client for the workspace service. The console touches workspace data
// through these calls only; fetch is injectable so tests can fake the wire.

import type {
  AbstractResult, DiffDoc, JobRecord, ModelDoc, MonitorConfigDoc, SymbolsDoc, ZoomDoc,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, public code: string, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(private base: string = "", private fetcher: FetchLike = fetch) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { "Content-Type": "application/json" };
    }
    const resp = await this.fetcher(`${this.base}${path}`, init);
    const text = await resp.text();
    if (!resp.ok) {
      let code = "HTTP_ERROR";
      let message = text;
      try {
        const doc = JSON.parse(text);
        code = doc.code ?? code;
        message = doc.message ?? message;
      } catch {
        // non-JSON error body: keep raw text
      }
      throw new ApiError(resp.status, code, message);
    }
    return JSON.parse(text) as T;
  }

  async requestRaw(path: string): Promise<string> {
    const resp = await this.fetcher(`${this.base}${path}`, { method: "GET" });
    const text = await resp.text();
    if (!resp.ok) {
      throw new ApiError(resp.status, "HTTP_ERROR", text);
    }
    return text;
  }

  symbols(): Promise<SymbolsDoc> {
    return this.request("GET", "/api/symbols");
  }

  listTraces(): Promise<{ traces: string[] }> {
    return this.request("GET", "/api/traces");
  }

  listConfigs(): Promise<{ configs: string[] }> {
    return this.request("GET", "/api/configs");
  }

  getConfig(name: string): Promise<{ version: number; config: MonitorConfigDoc }> {
    return this.request("GET", `/api/configs/${encodeURIComponent(name)}`);
  }

  putConfig(name: string, config: MonitorConfigDoc): Promise<{ name: string; version: number }> {
    return this.request("PUT", `/api/configs/${encodeURIComponent(name)}`, { config });
  }

  runDemo(scenario: string, params: Record<string, number> = {},
          id?: string): Promise<{ trace: string; events: number }> {
    return this.request("POST", "/api/traces:demo", { scenario, params, id });
  }

  abstract(config: string, traces: string[]): Promise<AbstractResult> {
    return this.request("POST", "/api/abstract", { config, traces });
  }

  mine(config: string, traces: string[], strategy: string, k: number,
       carefulDet: boolean, timeout?: number): Promise<{ job: string }> {
    return this.request("POST", "/api/mine", {
      config, traces, strategy, k, careful_det: carefulDet, timeout,
    });
  }

  job(id: string): Promise<JobRecord> {
    return this.request("GET", `/api/jobs/${encodeURIComponent(id)}`);
  }

  model(id: string): Promise<ModelDoc> {
    return this.request("GET", `/api/models/${encodeURIComponent(id)}`);
  }

  /** Exact stored bytes of the model document (for parity checks/downloads). */
  modelText(id: string): Promise<string> {
    return this.requestRaw(`/api/models/${encodeURIComponent(id)}`);
  }

  modelDot(id: string): Promise<string> {
    return this.requestRaw(`/api/models/${encodeURIComponent(id)}/dot`);
  }

  zoom(modelId: string, stateId: string): Promise<ZoomDoc> {
    return this.request(
      "GET",
      `/api/models/${encodeURIComponent(modelId)}/state/${encodeURIComponent(stateId)}/zoom`);
  }

  exam(modelId: string, stateId: string): Promise<{ state: string; score: number }> {
    return this.request(
      "GET", `/api/models/${encodeURIComponent(modelId)}/exam?state=${encodeURIComponent(stateId)}`);
  }

  diff(a: string, b: string): Promise<DiffDoc> {
    return this.request(
      "GET", `/api/diff?a=${encodeURIComponent(a)}&b=${encodeURIComponent(b)}`);
  }
}

/** Poll a mining job until it leaves the queue; resolves with the final record. */
export async function pollJob(
  api: ApiClient, jobId: string,
  opts: { intervalMs?: number; maxAttempts?: number;
          sleep?: (ms: number) => Promise<void> } = {},
): Promise<JobRecord> {
  const interval = opts.intervalMs ?? 500;
  const maxAttempts = opts.maxAttempts ?? 600;
  const sleep = opts.sleep ?? ((ms) => new Promise((r) => setTimeout(r, ms)));
  for (let attempt = 0; attempt < maxAttempts; attempt += 1) {
    const record = await api.job(jobId);
    if (record.status === "done" || record.status === "failed") {
      return record;
    }
    await sleep(interval);
  }
  throw new Error(`job ${jobId} did not finish after ${maxAttempts} polls`);
}
