// Browser bootstrap: wires the session to the page. Everything interesting
// lives in the pure modules; this file is the only one that touches the DOM.
import { ApiClient } from "./api.js";
import { ConsoleSession } from "./session.js";
import { searchFields, searchFunctions } from "./search.js";
import { diffHighlights, escapeHtml, renderDiffSummary, renderModel, renderWarnings, renderZoomPanel, } from "./render.js";
function el(id) {
    const node = document.getElementById(id);
    if (!node)
        throw new Error(`missing element #${id}`);
    return node;
}
function checkboxList(container, items, checked, onToggle) {
    container.innerHTML = items.map((item) => `<label class="pick"><input type="checkbox" data-item="${escapeHtml(item)}" ` +
        `${checked.has(item) ? "checked" : ""}/> ${escapeHtml(item)}</label>`).join("");
    for (const input of Array.from(container.querySelectorAll("input"))) {
        input.addEventListener("change", () => {
            onToggle(input.dataset.item);
        });
    }
}
async function boot() {
    const session = new ConsoleSession(new ApiClient(""));
    await session.load();
    const fieldSearch = el("field-search");
    const fnSearch = el("fn-search");
    const status = el("status");
    function note(text, isError = false) {
        status.textContent = text;
        status.className = isError ? "error" : "";
    }
    function refreshPickers() {
        checkboxList(el("field-list"), searchFields(session.symbols.fields, fieldSearch.value).map((f) => f.path), new Set(session.draft.fields), (path) => { session.toggleField(path); refreshAll(); });
        checkboxList(el("fn-list"), searchFunctions(session.symbols.functions, fnSearch.value).map((f) => f.name), new Set(session.draft.functions), (name) => { session.toggleFunction(name); refreshAll(); });
    }
    function refreshConstraints() {
        el("constraint-list").innerHTML = session.draft.constraints.map((c, i) => `<li><code>${escapeHtml(c)}</code> ` +
            `<button class="rm" data-index="${i}">remove</button></li>`).join("");
        for (const btn of Array.from(el("constraint-list").querySelectorAll("button.rm"))) {
            btn.addEventListener("click", () => {
                session.removeConstraint(Number(btn.dataset.index));
                refreshAll();
            });
        }
        el("findings").innerHTML = session.findings.map((f) => `<li><code>${escapeHtml(f.code)}</code> ${escapeHtml(f.message)}</li>`).join("");
    }
    function refreshModel() {
        const target = el("model-view");
        if (session.model === null) {
            target.innerHTML = renderModel({ meta: { kind: "efsm", config: "", constraints: [], filters: [],
                    eq_epsilon: 0, params: {} },
                states: [], transitions: [], warnings: [] });
            return;
        }
        target.innerHTML = renderModel(session.model, {
            selected: session.view.selectedState,
            highlightStates: session.view.highlightStates,
            highlightTransitions: session.view.highlightTransitions,
        });
        for (const group of Array.from(target.querySelectorAll("g.state"))) {
            group.addEventListener("click", async () => {
                const sid = group.dataset.state;
                try {
                    const zoom = await session.zoomInto(sid);
                    el("zoom-view").innerHTML = renderZoomPanel(zoom);
                    refreshModel();
                }
                catch (err) {
                    note(String(err), true);
                }
            });
        }
        el("warning-view").innerHTML = renderWarnings(session.model.warnings, session.draft.functions);
        for (const btn of Array.from(el("warning-view").querySelectorAll("button.add-fn"))) {
            btn.addEventListener("click", () => {
                session.addFunction(btn.dataset.fn);
                refreshAll();
                note(`added ${btn.dataset.fn}; regenerate to apply`);
            });
        }
    }
    function refreshTraces() {
        el("trace-list").innerHTML = session.traces.map((t) => `<label class="pick"><input type="checkbox" data-item="${escapeHtml(t)}" checked/> ` +
            `${escapeHtml(t)}</label>`).join("");
    }
    function selectedTraces() {
        return Array.from(el("trace-list").querySelectorAll("input"))
            .filter((i) => i.checked)
            .map((i) => i.dataset.item);
    }
    function refreshAll() {
        refreshPickers();
        refreshConstraints();
        refreshModel();
    }
    fieldSearch.addEventListener("input", refreshPickers);
    fnSearch.addEventListener("input", refreshPickers);
    el("add-constraint").addEventListener("click", () => {
        const input = el("constraint-input");
        const findings = session.addConstraintText(input.value.trim());
        if (findings.some((f) => f.subject === input.value.trim())) {
            note(`constraint rejected: ${input.value}`, true);
        }
        else {
            input.value = "";
        }
        refreshAll();
    });
    el("aspect-save").addEventListener("click", async () => {
        const name = el("aspect-name").value.trim() || "draft";
        try {
            const { version } = await session.saveAspect(name);
            note(`saved aspect '${name}' (version ${version})`);
        }
        catch (err) {
            note(String(err), true);
        }
    });
    el("aspect-load").addEventListener("click", async () => {
        const name = el("aspect-name").value.trim();
        try {
            await session.loadAspect(name);
            refreshAll();
            note(`loaded aspect '${name}'`);
        }
        catch (err) {
            note(String(err), true);
        }
    });
    el("generate").addEventListener("click", async () => {
        try {
            note("generating…");
            const model = await session.generate(selectedTraces());
            refreshAll();
            note(`model ${session.modelId}: ${model.states.length} states, ` +
                `${model.transitions.length} transitions, ` +
                `${model.warnings.length} warnings`);
        }
        catch (err) {
            note(String(err), true);
        }
    });
    el("run-demo").addEventListener("click", async () => {
        const scenario = el("demo-scenario").value;
        try {
            const result = await session.api.runDemo(scenario);
            session.traces = (await session.api.listTraces()).traces;
            refreshTraces();
            note(`demo trace '${result.trace}' with ${result.events} events`);
        }
        catch (err) {
            note(String(err), true);
        }
    });
    el("compare").addEventListener("click", async () => {
        const other = el("compare-id").value.trim();
        if (!other || session.model === null)
            return;
        try {
            const diff = await session.compareWith(other);
            const highlights = diffHighlights(session.model, diff);
            session.view.highlightStates = highlights.states;
            session.view.highlightTransitions = highlights.transitions;
            el("diff-view").innerHTML = renderDiffSummary(diff);
            refreshModel();
            note(`compared against ${other}`);
        }
        catch (err) {
            note(String(err), true);
        }
    });
    refreshTraces();
    refreshAll();
    note("workspace loaded");
}
boot().catch((err) => {
    const status = document.getElementById("status");
    if (status) {
        status.textContent = `failed to load workspace: ${err}`;
        status.className = "error";
    }
});
