// Wire types for the workspace service API.

export interface FieldInfo {
  path: string;
  kind: string;
}

export interface FunctionInfo {
  name: string;
  file: string;
  line: number;
}

export interface SymbolsDoc {
  fields: FieldInfo[];
  functions: FunctionInfo[];
}

export interface MonitorConfigDoc {
  name: string;
  fields: string[];
  functions: string[];
  constraints: string[];
  filters: string[];
  eq_epsilon: number;
}

export interface StateDoc {
  id: string;
  valuation: Record<string, string>;
  label: string;
  initial: boolean;
  segments: [string, number, number][];
}

export interface TransitionDoc {
  from: string;
  to: string;
  label: string;
}

export interface WarningDoc {
  trace: string;
  seq: number;
  field: string;
  fn: string;
}

export interface ModelDoc {
  meta: {
    kind: string;
    config: string;
    constraints: string[];
    filters: string[];
    eq_epsilon: number;
    params: Record<string, string>;
  };
  states: StateDoc[];
  transitions: TransitionDoc[];
  warnings: WarningDoc[];
}

export interface ZoomNodeDoc {
  id: string;
  trace: string;
  seq: number;
  kind: string;
  fn: string;
  vars: Record<string, number>;
}

export interface ZoomDoc {
  state: string;
  nodes: ZoomNodeDoc[];
  edges: [string, string, string][];
  entries: string[];
}

export interface DiffTransitionDoc {
  from: string[];
  label: string;
  to: string[];
}

export interface DiffDoc {
  states_only_a: string[][];
  states_only_b: string[][];
  transitions_only_a: DiffTransitionDoc[];
  transitions_only_b: DiffTransitionDoc[];
  shared_states: number;
}

export interface AbstractResult {
  model: string;
  stats: { states: number; transitions: number; initials: number; warnings: number };
}

export interface JobRecord {
  job: string;
  status: "pending" | "running" | "done" | "failed";
  outcome?: "ok" | "timeout" | "oom";
  model?: string;
  states?: number;
  transitions?: number;
  code?: string;
  message?: string;
}

export interface ValidationFinding {
  code: string;
  message: string;
  subject: string;
}
