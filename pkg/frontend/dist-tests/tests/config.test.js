import { test } from "node:test";
import assert from "node:assert/strict";
import { addConstraint, emptyConfig, parseConstraint, parseFilter, validateConfig } from "../src/config.js";
const SYMBOLS = {
    fields: [
        { path: "gear", kind: "int" },
        { path: "speed", kind: "float" },
        { path: "takeOffSpeed", kind: "float" },
        { path: "altitude", kind: "float" },
    ],
    functions: [
        { name: "accelerate", file: "listing1.c", line: 18 },
        { name: "takeoff", file: "listing1.c", line: 24 },
    ],
};
test("well-formed config has no findings", () => {
    const cfg = {
        name: "fig1",
        fields: ["altitude", "speed"],
        functions: ["accelerate", "takeoff"],
        constraints: ["cmp(altitude, 0)"],
        filters: [],
        eq_epsilon: 0,
    };
    assert.deepEqual(validateConfig(cfg, SYMBOLS), []);
});
test("unknown function is flagged with the server's code", () => {
    const cfg = { ...emptyConfig(), functions: ["takeoffX"],
        constraints: ["value_change(gear)"], fields: ["gear"] };
    const codes = validateConfig(cfg, SYMBOLS).map((f) => f.code);
    assert.deepEqual(codes, ["UNKNOWN_FUNCTION"]);
});
test("constraint on unselected field is flagged", () => {
    const cfg = { ...emptyConfig(), fields: ["gear"],
        constraints: ["cmp(speed, takeOffSpeed)"] };
    const codes = validateConfig(cfg, SYMBOLS).map((f) => f.code);
    assert.deepEqual(codes.sort(), ["FIELD_NOT_SELECTED", "FIELD_NOT_SELECTED"]);
});
test("empty constant range is RANGE_EMPTY", () => {
    const cfg = { ...emptyConfig(), fields: ["gear"],
        constraints: ["range(gear, 5, 5)"] };
    const codes = validateConfig(cfg, SYMBOLS).map((f) => f.code);
    assert.ok(codes.includes("RANGE_EMPTY"));
});
test("no constraints is a finding", () => {
    const codes = validateConfig(emptyConfig(), SYMBOLS).map((f) => f.code);
    assert.deepEqual(codes, ["NO_CONSTRAINTS"]);
});
test("constraint parsing accepts the three templates", () => {
    assert.deepEqual(parseConstraint("value_change(gear)"), { template: "value_change", x: "gear" });
    assert.deepEqual(parseConstraint("cmp(speed, takeOffSpeed)"), { template: "cmp", x: "speed", y: "takeOffSpeed" });
    assert.deepEqual(parseConstraint("range(altitude, 0, 100)"), { template: "range", x: "altitude", y: "0", z: "100" });
    assert.equal(parseConstraint("frobnicate(x)"), null);
    assert.equal(parseConstraint("cmp(speed)"), null);
});
test("filter parsing enforces numeric ordered bounds", () => {
    assert.deepEqual(parseFilter("filter(altitude, 0, 100)"), { x: "altitude", lo: 0, hi: 100 });
    assert.equal(parseFilter("filter(altitude, 9, 1)"), null);
    assert.equal(parseFilter("filter(altitude, a, b)"), null);
});
test("adding a constraint auto-selects its fields", () => {
    const cfg = addConstraint(emptyConfig(), "cmp(speed, takeOffSpeed)");
    assert.deepEqual(cfg.fields.sort(), ["speed", "takeOffSpeed"]);
    assert.deepEqual(cfg.constraints, ["cmp(speed, takeOffSpeed)"]);
    // constants are not fields
    const cfg2 = addConstraint(emptyConfig(), "cmp(altitude, 0)");
    assert.deepEqual(cfg2.fields, ["altitude"]);
});
