// HTTP client for the workspace service. The console touches workspace data
// through these calls only; fetch is injectable so tests can fake the wire.
export class ApiError extends Error {
    status;
    code;
    constructor(status, code, message) {
        super(message);
        this.status = status;
        this.code = code;
    }
}
export class ApiClient {
    base;
    fetcher;
    constructor(base = "", fetcher = fetch) {
        this.base = base;
        this.fetcher = fetcher;
    }
    async request(method, path, body) {
        const init = { method };
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
            }
            catch {
                // non-JSON error body: keep raw text
            }
            throw new ApiError(resp.status, code, message);
        }
        return JSON.parse(text);
    }
    async requestRaw(path) {
        const resp = await this.fetcher(`${this.base}${path}`, { method: "GET" });
        const text = await resp.text();
        if (!resp.ok) {
            throw new ApiError(resp.status, "HTTP_ERROR", text);
        }
        return text;
    }
    symbols() {
        return this.request("GET", "/api/symbols");
    }
    listTraces() {
        return this.request("GET", "/api/traces");
    }
    listConfigs() {
        return this.request("GET", "/api/configs");
    }
    getConfig(name) {
        return this.request("GET", `/api/configs/${encodeURIComponent(name)}`);
    }
    putConfig(name, config) {
        return this.request("PUT", `/api/configs/${encodeURIComponent(name)}`, { config });
    }
    runDemo(scenario, params = {}, id) {
        return this.request("POST", "/api/traces:demo", { scenario, params, id });
    }
    abstract(config, traces) {
        return this.request("POST", "/api/abstract", { config, traces });
    }
    mine(config, traces, strategy, k, carefulDet, timeout) {
        return this.request("POST", "/api/mine", {
            config, traces, strategy, k, careful_det: carefulDet, timeout,
        });
    }
    job(id) {
        return this.request("GET", `/api/jobs/${encodeURIComponent(id)}`);
    }
    model(id) {
        return this.request("GET", `/api/models/${encodeURIComponent(id)}`);
    }
    /** Exact stored bytes of the model document (for parity checks/downloads). */
    modelText(id) {
        return this.requestRaw(`/api/models/${encodeURIComponent(id)}`);
    }
    modelDot(id) {
        return this.requestRaw(`/api/models/${encodeURIComponent(id)}/dot`);
    }
    zoom(modelId, stateId) {
        return this.request("GET", `/api/models/${encodeURIComponent(modelId)}/state/${encodeURIComponent(stateId)}/zoom`);
    }
    exam(modelId, stateId) {
        return this.request("GET", `/api/models/${encodeURIComponent(modelId)}/exam?state=${encodeURIComponent(stateId)}`);
    }
    diff(a, b) {
        return this.request("GET", `/api/diff?a=${encodeURIComponent(a)}&b=${encodeURIComponent(b)}`);
    }
}
/** Poll a mining job until it leaves the queue; resolves with the final record. */
export async function pollJob(api, jobId, opts = {}) {
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
