// Pure HTML/SVG string rendering for the model, zoom, diff, and warning
// views. Event wiring happens in main.ts; keeping this string-pure makes
// the view logic testable without a DOM.

import { layoutModel, NODE_H, NODE_W } from "./layout.js";
import type { DiffDoc, ModelDoc, WarningDoc, ZoomDoc } from "./types.js";

export const TABLE_VIEW_THRESHOLD = 500;

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface RenderOptions {
  /** state ids to fill as suspicious (e.g. diff-only states) */
  highlightStates?: Set<string>;
  /** "from->label->to" keys to color as only-in-this-model */
  highlightTransitions?: Set<string>;
  /** currently selected state (zoom target) */
  selected?: string | null;
}

export function transitionKey(from: string, label: string, to: string): string {
  return `${from}->${label}->${to}`;
}

/** Map a diff document onto model-b state/transition highlight sets. */
export function diffHighlights(model: ModelDoc, diff: DiffDoc):
    { states: Set<string>; transitions: Set<string> } {
  const valKey = (val: Record<string, string>) =>
    Object.keys(val).sort((a, b) => Number(a) - Number(b)).map((k) => val[k]).join("|");
  const stateByVal = new Map<string, string>();
  for (const s of model.states) stateByVal.set(valKey(s.valuation), s.id);
  const states = new Set<string>();
  for (const val of diff.states_only_b) {
    const id = stateByVal.get(val.join("|"));
    if (id !== undefined) states.add(id);
  }
  const transitions = new Set<string>();
  for (const t of diff.transitions_only_b) {
    const from = stateByVal.get(t.from.join("|"));
    const to = stateByVal.get(t.to.join("|"));
    if (from !== undefined && to !== undefined) {
      transitions.add(transitionKey(from, t.label, to));
    }
  }
  return { states, transitions };
}

function nodeCenter(pos: { x: number; y: number }): { cx: number; cy: number } {
  return { cx: pos.x + NODE_W / 2, cy: pos.y + NODE_H / 2 };
}

export function renderModelSvg(model: ModelDoc, options: RenderOptions = {}): string {
  const placed = layoutModel(model);
  const byId = new Map(placed.nodes.map((n) => [n.id, n]));
  const parts: string[] = [];
  parts.push(`<svg class="model-view" viewBox="0 0 ${placed.width} ${placed.height}" ` +
             `xmlns="http://www.w3.org/2000/svg">`);
  parts.push(`<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" ` +
             `markerWidth="7" markerHeight="7" orient="auto-start-reverse">` +
             `<path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>`);

  const grouped = new Map<string, { label: string; highlight: boolean }[]>();
  for (const t of model.transitions) {
    const key = `${t.from}::${t.to}`;
    const list = grouped.get(key) ?? [];
    list.push({
      label: t.label,
      highlight: options.highlightTransitions?.has(transitionKey(t.from, t.label, t.to))
        ?? false,
    });
    grouped.set(key, list);
  }
  for (const [key, labels] of [...grouped.entries()].sort()) {
    const [from, to] = key.split("::");
    const a = byId.get(from);
    const b = byId.get(to);
    if (!a || !b) continue;
    labels.sort((x, y) => (x.label < y.label ? -1 : 1));
    const anyHighlight = labels.some((l) => l.highlight);
    const cls = anyHighlight ? "edge only-in-b" : "edge";
    const text = labels.map((l) => l.label).join(", ");
    if (from === to) {
      const { cx } = nodeCenter(a);
      const top = a.y;
      parts.push(`<path class="${cls}" d="M ${cx - 18} ${top} C ${cx - 30} ${top - 34}, ` +
                 `${cx + 30} ${top - 34}, ${cx + 18} ${top}" fill="none" ` +
                 `marker-end="url(#arrow)"/>`);
      parts.push(`<text class="edge-label" x="${cx}" y="${top - 28}" ` +
                 `text-anchor="middle">${escapeHtml(text)}</text>`);
    } else {
      const ca = nodeCenter(a);
      const cb = nodeCenter(b);
      parts.push(`<line class="${cls}" x1="${ca.cx}" y1="${ca.cy}" x2="${cb.cx}" ` +
                 `y2="${cb.cy}" marker-end="url(#arrow)"/>`);
      const mx = (ca.cx + cb.cx) / 2;
      const my = (ca.cy + cb.cy) / 2 - 6;
      parts.push(`<text class="edge-label" x="${mx}" y="${my}" ` +
                 `text-anchor="middle">${escapeHtml(text)}</text>`);
    }
  }

  for (const s of model.states) {
    const pos = byId.get(s.id);
    if (!pos) continue;
    const classes = ["state"];
    if (s.initial) classes.push("initial");
    if (options.highlightStates?.has(s.id)) classes.push("only-in-b");
    if (options.selected === s.id) classes.push("selected");
    parts.push(`<g class="${classes.join(" ")}" data-state="${escapeHtml(s.id)}">`);
    parts.push(`<rect x="${pos.x}" y="${pos.y}" width="${NODE_W}" height="${NODE_H}" ` +
               `rx="10"/>`);
    parts.push(`<text x="${pos.x + NODE_W / 2}" y="${pos.y + 19}" ` +
               `text-anchor="middle" class="state-id">${escapeHtml(s.id)}</text>`);
    parts.push(`<text x="${pos.x + NODE_W / 2}" y="${pos.y + 36}" ` +
               `text-anchor="middle" class="state-label">` +
               `${escapeHtml(s.label || "")}</text>`);
    parts.push(`</g>`);
  }
  parts.push(`</svg>`);
  return parts.join("");
}

export function renderModelTable(model: ModelDoc): string {
  const rows = model.transitions
    .map((t) => ({ ...t }))
    .sort((a, b) => (a.from < b.from ? -1 : a.from > b.from ? 1
      : a.label < b.label ? -1 : a.label > b.label ? 1
      : a.to < b.to ? -1 : 1))
    .map((t) => `<tr><td>${escapeHtml(t.from)}</td><td>${escapeHtml(t.label)}</td>` +
                `<td>${escapeHtml(t.to)}</td></tr>`)
    .join("");
  return `<div class="table-view">` +
    `<p class="notice">Model has ${model.states.length} states; showing the ` +
    `transition table instead of a graph.</p>` +
    `<table><thead><tr><th>from</th><th>label</th><th>to</th></tr></thead>` +
    `<tbody>${rows}</tbody></table></div>`;
}

/** Graph view for small models, table view with a notice past the threshold. */
export function renderModel(model: ModelDoc, options: RenderOptions = {}): string {
  if (model.states.length === 0) {
    return `<p class="empty-state">No states yet. Pick fields, functions, and at ` +
      `least one constraint, then generate a model from a trace.</p>`;
  }
  if (model.states.length > TABLE_VIEW_THRESHOLD) {
    return renderModelTable(model);
  }
  return renderModelSvg(model, options);
}

export function renderZoomPanel(zoom: ZoomDoc): string {
  const rows = zoom.nodes.map((n) => {
    const vars = Object.entries(n.vars).map(([k, v]) => `${k}=${v}`).join(" ");
    const entry = zoom.entries.includes(n.id) ? " entry" : "";
    return `<tr class="zoom-row${entry}"><td>${n.seq}</td>` +
      `<td>${escapeHtml(n.kind)}</td><td>${escapeHtml(n.fn)}</td>` +
      `<td>${escapeHtml(vars)}</td></tr>`;
  }).join("");
  return `<div class="zoom-panel" data-state="${escapeHtml(zoom.state)}">` +
    `<h3>Inside ${escapeHtml(zoom.state)}</h3>` +
    `<p>${zoom.nodes.length} concrete events, ${zoom.edges.length} steps, ` +
    `${zoom.entries.length} segment(s)</p>` +
    `<table><thead><tr><th>seq</th><th>kind</th><th>fn</th><th>vars</th></tr></thead>` +
    `<tbody>${rows}</tbody></table></div>`;
}

/** Warning list; each row carries a data-fn hook for one-click selection. */
export function renderWarnings(warnings: WarningDoc[], selected: string[]): string {
  if (warnings.length === 0) {
    return `<p class="no-warnings">No unexplained changes.</p>`;
  }
  const items = warnings.map((w) => {
    const already = selected.includes(w.fn);
    const action = already
      ? `<span class="added">selected</span>`
      : `<button class="add-fn" data-fn="${escapeHtml(w.fn)}">add ${escapeHtml(w.fn)}</button>`;
    return `<li>field <code>${escapeHtml(w.field)}</code> changed at seq ${w.seq} ` +
      `of <code>${escapeHtml(w.trace)}</code> by unselected ` +
      `<code>${escapeHtml(w.fn)}</code> ${action}</li>`;
  }).join("");
  return `<ul class="warnings">${items}</ul>`;
}

export function renderDiffSummary(diff: DiffDoc): string {
  return `<div class="diff-summary">` +
    `<span>${diff.states_only_a.length} states only in A</span>` +
    `<span>${diff.states_only_b.length} states only in B</span>` +
    `<span>${diff.transitions_only_a.length} transitions only in A</span>` +
    `<span class="emph">${diff.transitions_only_b.length} transitions only in B</span>` +
    `<span>${diff.shared_states} shared states</span></div>`;
}
