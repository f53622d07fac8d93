// Console session state: the draft config, the rendered model, the optional
// comparison slot, and the save/generate/zoom actions the UI wires up.
// All mutation goes through the API; the invariant maintained here is that
// a draft config is only ever PUT after passing the client-side validation.

import { ApiClient, pollJob } from "./api.js";
import { addConstraint, validateConfig } from "./config.js";
import type {
  DiffDoc, JobRecord, ModelDoc, MonitorConfigDoc, SymbolsDoc, ValidationFinding,
} from "./types.js";

export interface ViewState {
  selectedState: string | null;
  highlightStates: Set<string>;
  highlightTransitions: Set<string>;
}

export class ConsoleSession {
  symbols: SymbolsDoc = { fields: [], functions: [] };
  draft: MonitorConfigDoc;
  findings: ValidationFinding[] = [];
  traces: string[] = [];
  modelId: string | null = null;
  model: ModelDoc | null = null;
  comparisonId: string | null = null;
  comparison: DiffDoc | null = null;
  view: ViewState = {
    selectedState: null,
    highlightStates: new Set(),
    highlightTransitions: new Set(),
  };

  constructor(public api: ApiClient, draft?: MonitorConfigDoc) {
    this.draft = draft ?? {
      name: "draft", fields: [], functions: [], constraints: [], filters: [],
      eq_epsilon: 0,
    };
  }

  async load(): Promise<void> {
    this.symbols = await this.api.symbols();
    this.traces = (await this.api.listTraces()).traces;
    this.revalidate();
  }

  revalidate(): ValidationFinding[] {
    this.findings = validateConfig(this.draft, this.symbols);
    return this.findings;
  }

  toggleField(path: string): void {
    const set = new Set(this.draft.fields);
    if (set.has(path)) set.delete(path); else set.add(path);
    this.draft = { ...this.draft, fields: [...set] };
    this.revalidate();
  }

  toggleFunction(name: string): void {
    const set = new Set(this.draft.functions);
    if (set.has(name)) set.delete(name); else set.add(name);
    this.draft = { ...this.draft, functions: [...set] };
    this.revalidate();
  }

  /** One-click action on an unexplained-change warning. */
  addFunction(name: string): void {
    if (!this.draft.functions.includes(name)) {
      this.draft = { ...this.draft, functions: [...this.draft.functions, name] };
      this.revalidate();
    }
  }

  addConstraintText(text: string): ValidationFinding[] {
    this.draft = addConstraint(this.draft, text);
    return this.revalidate();
  }

  removeConstraint(index: number): void {
    const constraints = this.draft.constraints.filter((_c, i) => i !== index);
    this.draft = { ...this.draft, constraints };
    this.revalidate();
  }

  /** Persist the draft as a named aspect; refuses drafts the server would. */
  async saveAspect(name?: string): Promise<{ version: number }> {
    const aspect = { ...this.draft, name: name ?? this.draft.name };
    const findings = validateConfig(aspect, this.symbols);
    if (findings.length > 0) {
      throw new Error(`draft config is invalid: ${findings.map((f) => f.code).join(", ")}`);
    }
    this.draft = aspect;
    const result = await this.api.putConfig(aspect.name, aspect);
    return { version: result.version };
  }

  async loadAspect(name: string): Promise<void> {
    const doc = await this.api.getConfig(name);
    this.draft = doc.config;
    this.revalidate();
  }

  async generate(traceIds?: string[]): Promise<ModelDoc> {
    await this.saveAspect();
    const result = await this.api.abstract(this.draft.name,
                                           traceIds ?? this.traces);
    this.modelId = result.model;
    this.model = await this.api.model(result.model);
    this.view = { selectedState: null, highlightStates: new Set(),
                  highlightTransitions: new Set() };
    this.comparison = null;
    this.comparisonId = null;
    return this.model;
  }

  async mine(strategy: string, k: number, carefulDet: boolean,
             traceIds?: string[]): Promise<JobRecord> {
    await this.saveAspect();
    const { job } = await this.api.mine(this.draft.name, traceIds ?? this.traces,
                                        strategy, k, carefulDet);
    return pollJob(this.api, job);
  }

  async zoomInto(stateId: string) {
    if (this.modelId === null) {
      throw new Error("no model generated yet");
    }
    this.view.selectedState = stateId;
    return this.api.zoom(this.modelId, stateId);
  }

  /** Compare the current model (A) against another model id (B). */
  async compareWith(otherModelId: string): Promise<DiffDoc> {
    if (this.modelId === null) {
      throw new Error("no model generated yet");
    }
    this.comparisonId = otherModelId;
    this.comparison = await this.api.diff(this.modelId, otherModelId);
    return this.comparison;
  }
}
