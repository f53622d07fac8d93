// Draft monitor-config editing with client-side validation that mirrors the
// service's checks (same finding codes), so a draft never reaches the wire
// in a state the server would reject.
const CALL_RE = /^\s*(\w+)\s*\(([^)]*)\)\s*$/;
const NUMBER_RE = /^[+-]?(\d+\.?\d*([eE][+-]?\d+)?|\.\d+([eE][+-]?\d+)?)$/;
const PATH_RE = /^[A-Za-z_]\w*(\.[A-Za-z_]\w*|\[\d+\])*$/;
export function parseConstraint(text) {
    const m = CALL_RE.exec(text);
    if (!m)
        return null;
    const args = m[2].trim() === "" ? [] : m[2].split(",").map((a) => a.trim());
    const operandOk = (tok) => NUMBER_RE.test(tok) || PATH_RE.test(tok);
    switch (m[1]) {
        case "value_change":
            if (args.length !== 1 || !PATH_RE.test(args[0]))
                return null;
            return { template: "value_change", x: args[0] };
        case "cmp":
            if (args.length !== 2 || !PATH_RE.test(args[0]) || !operandOk(args[1]))
                return null;
            return { template: "cmp", x: args[0], y: args[1] };
        case "range": {
            if (args.length !== 3 || !PATH_RE.test(args[0])
                || !operandOk(args[1]) || !operandOk(args[2]))
                return null;
            return { template: "range", x: args[0], y: args[1], z: args[2] };
        }
        default:
            return null;
    }
}
export function parseFilter(text) {
    const m = CALL_RE.exec(text);
    if (!m || m[1] !== "filter")
        return null;
    const args = m[2].split(",").map((a) => a.trim());
    if (args.length !== 3 || !PATH_RE.test(args[0])
        || !NUMBER_RE.test(args[1]) || !NUMBER_RE.test(args[2]))
        return null;
    const lo = Number(args[1]);
    const hi = Number(args[2]);
    if (lo > hi)
        return null;
    return { x: args[0], lo, hi };
}
function referencedFields(spec) {
    const refs = [spec.x];
    for (const operand of [spec.y, spec.z]) {
        if (operand !== undefined && !NUMBER_RE.test(operand))
            refs.push(operand);
    }
    return refs;
}
/** Mirrors the server-side validate_config finding set. */
export function validateConfig(config, symbols) {
    const findings = [];
    const knownFields = new Set(symbols.fields.map((f) => f.path));
    const knownFns = new Set(symbols.functions.map((f) => f.name));
    const selected = new Set(config.fields);
    for (const path of config.fields) {
        if (!knownFields.has(path)) {
            findings.push({ code: "UNKNOWN_FIELD", message: `field not in symbols: ${path}`,
                subject: path });
        }
    }
    for (const fn of config.functions) {
        if (!knownFns.has(fn)) {
            findings.push({ code: "UNKNOWN_FUNCTION", message: `function not in symbols: ${fn}`,
                subject: fn });
        }
    }
    if (config.constraints.length === 0) {
        findings.push({ code: "NO_CONSTRAINTS", message: "config has no constraints",
            subject: config.name });
    }
    for (const text of config.constraints) {
        const spec = parseConstraint(text);
        if (spec === null) {
            findings.push({ code: "CONSTRAINT_SYNTAX", message: `bad constraint: ${text}`,
                subject: text });
            continue;
        }
        for (const path of referencedFields(spec)) {
            if (!knownFields.has(path)) {
                findings.push({ code: "UNKNOWN_FIELD", message: `field not in symbols: ${path}`,
                    subject: path });
            }
            if (!selected.has(path)) {
                findings.push({ code: "FIELD_NOT_SELECTED",
                    message: `constraint references unselected field: ${path}`,
                    subject: path });
            }
        }
        if (spec.template === "range" && spec.y !== undefined && spec.z !== undefined
            && NUMBER_RE.test(spec.y) && NUMBER_RE.test(spec.z)
            && !(Number(spec.y) < Number(spec.z))) {
            findings.push({ code: "RANGE_EMPTY",
                message: `range bounds must satisfy y < z: ${text}`, subject: spec.x });
        }
    }
    for (const text of config.filters) {
        const flt = parseFilter(text);
        if (flt === null) {
            findings.push({ code: "FILTER_SYNTAX", message: `bad filter: ${text}`, subject: text });
            continue;
        }
        if (!knownFields.has(flt.x)) {
            findings.push({ code: "UNKNOWN_FIELD", message: `field not in symbols: ${flt.x}`,
                subject: flt.x });
        }
        if (!selected.has(flt.x)) {
            findings.push({ code: "FIELD_NOT_SELECTED",
                message: `filter references unselected field: ${flt.x}`,
                subject: flt.x });
        }
    }
    if (config.eq_epsilon < 0) {
        findings.push({ code: "EPS_NEGATIVE", message: "eq_epsilon must be non-negative",
            subject: config.name });
    }
    return findings;
}
export function emptyConfig(name = "draft") {
    return { name, fields: [], functions: [], constraints: [], filters: [], eq_epsilon: 0 };
}
/** Selecting a constraint's fields implicitly adds them to the monitored set. */
export function addConstraint(config, text) {
    const spec = parseConstraint(text);
    const fields = new Set(config.fields);
    if (spec !== null) {
        for (const path of referencedFields(spec))
            fields.add(path);
    }
    return {
        ...config,
        fields: [...fields],
        constraints: [...config.constraints, text],
    };
}
export function toggle(list, item) {
    return list.includes(item) ? list.filter((x) => x !== item) : [...list, item];
}
