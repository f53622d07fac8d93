// Live console-parity checks against a real workspace service: a config
// authored through the console session must produce, via the API, a model
// byte-identical to the CLI run with the saved config, and the zoom panel
// must render exactly the node/edge counts the zoom endpoint reports.
import { test } from "node:test";
import assert from "node:assert/strict";
import { spawn, spawnSync } from "node:child_process";
import { mkdirSync, mkdtempSync, readFileSync, rmSync } from "node:fs";
import { join } from "node:path";
import { tmpdir } from "node:os";
import { ApiClient } from "../src/api.js";
import { ConsoleSession } from "../src/session.js";
import { renderZoomPanel } from "../src/render.js";
const PY = process.env.TRACELENS_PYTHON ?? "python3";
function cli(args, cwd) {
    const result = spawnSync(PY, ["-m", "tracelens.cli", ...args], { encoding: "utf-8", cwd });
    assert.equal(result.status, 0, `cli ${args.join(" ")} failed:\n${result.stdout}\n${result.stderr}`);
}
async function startServer(workspace) {
    const proc = spawn(PY, ["-m", "tracelens.cli", "serve", "--workspace", workspace,
        "--port", "0"]);
    let buffer = "";
    const base = await new Promise((resolve, reject) => {
        const timer = setTimeout(() => reject(new Error(`server did not start: ${buffer}`)), 15000);
        proc.stdout.on("data", (chunk) => {
            buffer += new TextDecoder().decode(chunk);
            const m = /http:\/\/([\w.]+):(\d+)\//.exec(buffer);
            if (m) {
                clearTimeout(timer);
                resolve(`http://${m[1]}:${m[2]}`);
            }
        });
        proc.stderr.on("data", (chunk) => {
            buffer += new TextDecoder().decode(chunk);
        });
        proc.on("exit", () => reject(new Error(`server exited early: ${buffer}`)));
    });
    return { base, stop: () => proc.kill("SIGTERM") };
}
test("console-authored config yields CLI-byte-identical models and zoom counts", async () => {
    const root = mkdtempSync(join(tmpdir(), "tracelens-parity-"));
    const workspace = join(root, "ws");
    mkdirSync(join(workspace, "traces"), { recursive: true });
    cli(["demo", "--scenario", "takeoff",
        "-o", join(workspace, "traces", "takeoff.trc"),
        "--symbols", join(workspace, "symbols.manifest")]);
    const server = await startServer(workspace);
    try {
        const api = new ApiClient(server.base);
        const session = new ConsoleSession(api);
        await session.load();
        assert.ok(session.symbols.fields.map((f) => f.path).includes("altitude"));
        assert.deepEqual(session.traces, ["takeoff"]);
        // author the config exactly as the console UI would
        session.toggleField("altitude");
        session.toggleField("speed");
        session.toggleFunction("accelerate");
        session.toggleFunction("takeoff");
        session.addConstraintText("cmp(altitude, 0)");
        session.draft = { ...session.draft, name: "fig1" };
        assert.deepEqual(session.revalidate(), []);
        const model = await session.generate(["takeoff"]);
        assert.equal(model.states.length, 2);
        assert.equal(model.transitions.length, 3);
        assert.ok(session.modelId);
        const apiBytes = await api.modelText(session.modelId);
        // same saved config through the CLI
        const ftrc = join(root, "takeoff.ftrc");
        const modelFile = join(root, "model.json");
        const savedConfig = join(workspace, "configs", "fig1.cfg.json");
        cli(["filter", join(workspace, "traces", "takeoff.trc"),
            "--config", savedConfig, "-o", ftrc]);
        cli(["abstract", ftrc, "--config", savedConfig, "-o", modelFile]);
        const cliBytes = readFileSync(modelFile, "utf-8");
        assert.equal(cliBytes, apiBytes, "CLI and API model bytes differ");
        // zoom on every state renders the endpoint's node/edge counts
        for (const state of model.states) {
            const zoom = await session.zoomInto(state.id);
            const html = renderZoomPanel(zoom);
            assert.ok(html.includes(`${zoom.nodes.length} concrete events, ${zoom.edges.length} steps`), `zoom panel for ${state.id} does not report endpoint counts`);
            const rows = (html.match(/<tr class="zoom-row/g) ?? []).length;
            assert.equal(rows, zoom.nodes.length);
        }
    }
    finally {
        server.stop();
        rmSync(root, { recursive: true, force: true });
    }
});
test("aspect round trip: saved console config reloads identically", async () => {
    const root = mkdtempSync(join(tmpdir(), "tracelens-aspect-"));
    const workspace = join(root, "ws");
    mkdirSync(join(workspace, "traces"), { recursive: true });
    cli(["demo", "--scenario", "takeoff_with_gear",
        "-o", join(workspace, "traces", "gear.trc"),
        "--symbols", join(workspace, "symbols.manifest")]);
    const server = await startServer(workspace);
    try {
        const session = new ConsoleSession(new ApiClient(server.base));
        await session.load();
        for (const field of ["gear", "speed", "takeOffSpeed", "altitude",
            "groundAlt", "safeAltForGearRetract"]) {
            session.toggleField(field);
        }
        for (const fn of ["accelerate", "takeoff", "retractGear"]) {
            session.toggleFunction(fn);
        }
        session.addConstraintText("value_change(gear)");
        session.addConstraintText("cmp(speed, takeOffSpeed)");
        session.addConstraintText("range(altitude, groundAlt, safeAltForGearRetract)");
        session.draft = { ...session.draft, name: "takeOff" };
        const saved = await session.saveAspect();
        assert.equal(saved.version, 1);
        const fresh = new ConsoleSession(new ApiClient(server.base));
        await fresh.load();
        await fresh.loadAspect("takeOff");
        assert.deepEqual(fresh.draft.constraints, session.draft.constraints);
        assert.deepEqual([...fresh.draft.fields].sort(), [...session.draft.fields].sort());
        assert.deepEqual(fresh.revalidate(), []);
        const model = await fresh.generate(["gear"]);
        assert.ok(model.states.length >= 3 && model.states.length <= 12);
    }
    finally {
        server.stop();
        rmSync(root, { recursive: true, force: true });
    }
});
