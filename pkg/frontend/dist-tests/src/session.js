// Console session state: the draft config, the rendered model, the optional
// comparison slot, and the save/generate/zoom actions the UI wires up.
// All mutation goes through the API; the invariant maintained here is that
// a draft config is only ever PUT after passing the client-side validation.
import { pollJob } from "./api.js";
import { addConstraint, validateConfig } from "./config.js";
export class ConsoleSession {
    api;
    symbols = { fields: [], functions: [] };
    draft;
    findings = [];
    traces = [];
    modelId = null;
    model = null;
    comparisonId = null;
    comparison = null;
    view = {
        selectedState: null,
        highlightStates: new Set(),
        highlightTransitions: new Set(),
    };
    constructor(api, draft) {
        this.api = api;
        this.draft = draft ?? {
            name: "draft", fields: [], functions: [], constraints: [], filters: [],
            eq_epsilon: 0,
        };
    }
    async load() {
        this.symbols = await this.api.symbols();
        this.traces = (await this.api.listTraces()).traces;
        this.revalidate();
    }
    revalidate() {
        this.findings = validateConfig(this.draft, this.symbols);
        return this.findings;
    }
    toggleField(path) {
        const set = new Set(this.draft.fields);
        if (set.has(path))
            set.delete(path);
        else
            set.add(path);
        this.draft = { ...this.draft, fields: [...set] };
        this.revalidate();
    }
    toggleFunction(name) {
        const set = new Set(this.draft.functions);
        if (set.has(name))
            set.delete(name);
        else
            set.add(name);
        this.draft = { ...this.draft, functions: [...set] };
        this.revalidate();
    }
    /** One-click action on an unexplained-change warning. */
    addFunction(name) {
        if (!this.draft.functions.includes(name)) {
            this.draft = { ...this.draft, functions: [...this.draft.functions, name] };
            this.revalidate();
        }
    }
    addConstraintText(text) {
        this.draft = addConstraint(this.draft, text);
        return this.revalidate();
    }
    removeConstraint(index) {
        const constraints = this.draft.constraints.filter((_c, i) => i !== index);
        this.draft = { ...this.draft, constraints };
        this.revalidate();
    }
    /** Persist the draft as a named aspect; refuses drafts the server would. */
    async saveAspect(name) {
        const aspect = { ...this.draft, name: name ?? this.draft.name };
        const findings = validateConfig(aspect, this.symbols);
        if (findings.length > 0) {
            throw new Error(`draft config is invalid: ${findings.map((f) => f.code).join(", ")}`);
        }
        this.draft = aspect;
        const result = await this.api.putConfig(aspect.name, aspect);
        return { version: result.version };
    }
    async loadAspect(name) {
        const doc = await this.api.getConfig(name);
        this.draft = doc.config;
        this.revalidate();
    }
    async generate(traceIds) {
        await this.saveAspect();
        const result = await this.api.abstract(this.draft.name, traceIds ?? this.traces);
        this.modelId = result.model;
        this.model = await this.api.model(result.model);
        this.view = { selectedState: null, highlightStates: new Set(),
            highlightTransitions: new Set() };
        this.comparison = null;
        this.comparisonId = null;
        return this.model;
    }
    async mine(strategy, k, carefulDet, traceIds) {
        await this.saveAspect();
        const { job } = await this.api.mine(this.draft.name, traceIds ?? this.traces, strategy, k, carefulDet);
        return pollJob(this.api, job);
    }
    async zoomInto(stateId) {
        if (this.modelId === null) {
            throw new Error("no model generated yet");
        }
        this.view.selectedState = stateId;
        return this.api.zoom(this.modelId, stateId);
    }
    /** Compare the current model (A) against another model id (B). */
    async compareWith(otherModelId) {
        if (this.modelId === null) {
            throw new Error("no model generated yet");
        }
        this.comparisonId = otherModelId;
        this.comparison = await this.api.diff(this.modelId, otherModelId);
        return this.comparison;
    }
}
