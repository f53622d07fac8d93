"""tracelens command line: symbols, demo traces, filtering, abstraction,
mining, metrics, and the local workspace service."""
from __future__ import annotations

import json
import os
import re

import click

from . import abstractor, demo, metrics, miners, model_io, report, symbols, traces
from .errors import TraceLensError


def _fail(exc: TraceLensError):
    raise click.ClickException(f"{exc.code}: {exc}")


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def parse_duration(text: str) -> float:
    """Parse '20m', '2s', '500ms', '1.5h', or bare seconds."""
    m = re.match(r"^\s*([0-9.]+)\s*(ms|s|m|h)?\s*$", text)
    if not m:
        raise click.BadParameter(f"bad duration: {text!r}")
    value = float(m.group(1))
    unit = m.group(2) or "s"
    return value * {"ms": 0.001, "s": 1.0, "m": 60.0, "h": 3600.0}[unit]


def parse_bytes(text: str) -> int:
    m = re.match(r"^\s*([0-9.]+)\s*(B|KB|KiB|MB|MiB|GB|GiB)?\s*$", text, re.IGNORECASE)
    if not m:
        raise click.BadParameter(f"bad byte count: {text!r}")
    value = float(m.group(1))
    unit = (m.group(2) or "B").lower()
    scale = {"b": 1, "kb": 1000, "kib": 1024, "mb": 1000 ** 2, "mib": 1024 ** 2,
             "gb": 1000 ** 3, "gib": 1024 ** 3}[unit]
    return int(value * scale)


def _load_config(path: str):
    try:
        return model_io.parse_config(_read(path))
    except TraceLensError as exc:
        _fail(exc)


def _load_ftraces(paths):
    out = []
    for path in paths:
        try:
            out.append(traces.parse_filtered(_read(path)))
        except TraceLensError as exc:
            _fail(exc)
    return out


@click.group()
def main():
    """Interactive specification-mining workbench."""


@main.command("extract-symbols")
@click.argument("paths", nargs=-1, required=True,
                type=click.Path(exists=True, readable=True))
@click.option("-o", "--output", required=True, type=click.Path())
@click.option("--skipped-report", type=click.Path(), default=None,
              help="Also write the skipped-declaration list.")
def extract_symbols(paths, output, skipped_report):
    """Scan C sources (files or directories) into a symbol manifest."""
    files = []
    for path in paths:
        if os.path.isdir(path):
            for root, _dirs, names in sorted(os.walk(path)):
                for name in sorted(names):
                    if name.endswith((".c", ".h")):
                        files.append(os.path.join(root, name))
        else:
            files.append(path)
    try:
        rep = symbols.scan_sources(files)
        symbols.save_manifest(rep.symbols, output)
    except TraceLensError as exc:
        _fail(exc)
    if skipped_report:
        _write(skipped_report, "".join(
            f"{f}:{line}: {reason}\n" for (f, line, reason) in rep.skipped))
    click.echo(f"{len(rep.symbols.fields)} fields, {len(rep.symbols.functions)} functions"
               f" -> {output} ({len(rep.skipped)} skipped)")


@main.command("demo")
@click.option("--scenario", type=click.Choice(demo.SCENARIOS), default="takeoff")
@click.option("--param", "params", multiple=True, help="Override k=v, repeatable.")
@click.option("-o", "--output", required=True, type=click.Path())
@click.option("--symbols", "symbols_out", type=click.Path(), default=None,
              help="Also write the matching symbol manifest.")
@click.option("--trace-id", default=None)
def demo_cmd(scenario, params, output, symbols_out, trace_id):
    """Generate a deterministic autopilot scenario trace."""
    overrides = {}
    for item in params:
        if "=" not in item:
            raise click.BadParameter(f"--param needs k=v, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key] = value
    try:
        sc = demo.scenario_from_params(scenario, overrides)
    except ValueError as exc:
        raise click.BadParameter(str(exc))
    trace = demo.run_scenario(sc, trace_id or os.path.splitext(os.path.basename(output))[0])
    _write(output, traces.serialize_trace(trace))
    if symbols_out:
        symbols.save_manifest(demo.demo_symbol_table(), symbols_out)
    click.echo(f"{len(trace.events)} events -> {output}")


@main.command("filter")
@click.argument("trace_file", type=click.Path(exists=True))
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
def filter_cmd(trace_file, config_path, output):
    """Filter a raw trace down to the selected mutating calls."""
    config = _load_config(config_path)
    trace_id = os.path.splitext(os.path.basename(trace_file))[0]
    try:
        trace = traces.parse_trace(_read(trace_file).splitlines(), trace_id)
        ftrace = traces.filter_trace(trace, config)
    except TraceLensError as exc:
        _fail(exc)
    _write(output, traces.serialize_filtered(ftrace))
    click.echo(f"{len(ftrace.steps)} steps -> {output}")


@main.command("abstract")
@click.argument("ftrace_files", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
@click.option("--dot", "dot_path", type=click.Path(), default=None)
@click.option("--warn-unexplained", is_flag=True,
              help="Print unexplained-change warnings to stderr.")
def abstract_cmd(ftrace_files, config_path, output, dot_path, warn_unexplained):
    """Fold filtered traces into the valuation-keyed state machine."""
    config = _load_config(config_path)
    ftraces = _load_ftraces(ftrace_files)
    try:
        model = abstractor.build_model(ftraces, config)
    except TraceLensError as exc:
        _fail(exc)
    _write(output, model_io.serialize_model(model))
    if dot_path:
        _write(dot_path, model_io.export_dot(model, show_valuations=True))
    if warn_unexplained:
        for w in model.warnings:
            click.echo(f"warning: {w.text()}", err=True)
    stats = metrics.model_stats(model)
    click.echo(f"{stats.states} states, {stats.transitions} transitions, "
               f"{stats.warnings} warnings -> {output}")


def _params_from_options(strategy, k, careful_det, timeout, memory_budget):
    return miners.MinerParams(
        strategy=strategy, k=k, careful_det=careful_det,
        timeout=parse_duration(timeout) if timeout else None,
        memory_budget=parse_bytes(memory_budget) if memory_budget else None)


@main.command("mine")
@click.argument("ftrace_files", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--strategy", type=click.Choice(miners.STRATEGIES), required=True)
@click.option("--k", type=int, default=1, show_default=True)
@click.option("--careful-det", is_flag=True)
@click.option("--timeout", default=None, help="e.g. 20m, 2s")
@click.option("--memory-budget", default=None, help="e.g. 64MiB")
@click.option("-o", "--output", required=True, type=click.Path())
def mine_cmd(ftrace_files, strategy, k, careful_det, timeout, memory_budget, output):
    """Run one automated miner over filtered traces."""
    ftraces = _load_ftraces(ftrace_files)
    params = _params_from_options(strategy, k, careful_det, timeout, memory_budget)
    try:
        fsm = miners.mine(ftraces, params)
    except TraceLensError as exc:
        _fail(exc)
    _write(output, model_io.serialize_fsm_with_params(fsm, {
        "strategy": strategy, "k": str(k), "careful_det": "on" if careful_det else "off"}))
    click.echo(f"{len(fsm.states)} states, {len(fsm.transitions)} transitions -> {output}")


_GRID_KEYS = ("strategies", "k", "careful_det")


@main.command("mine-sweep")
@click.argument("args", nargs=-1, required=True)
@click.option("--grid", "grid_flag", is_flag=True,
              help="Introduces key=value grid assignments among the arguments.")
@click.option("--timeout", default=None, help="Per-run time budget, e.g. 2s")
@click.option("--memory-budget", default=None, help="Per-run memory budget, e.g. 64MiB")
@click.option("-o", "--output", required=True, type=click.Path(),
              help="Results table (TSV).")
@click.option("--plot", "plot_path", type=click.Path(), default=None,
              help="Also render the sweep as a figure.")
def mine_sweep(args, grid_flag, timeout, memory_budget, output, plot_path):
    """Run a configuration grid; arguments are key=value grid assignments
    (strategies=..., k=..., careful_det=...) and filtered-trace files."""
    grid = {"strategies": list(miners.STRATEGIES), "k": [0, 1, 2],
            "careful_det": [True, False]}
    files = []
    for arg in args:
        key, _, value = arg.partition("=")
        if key in _GRID_KEYS and value:
            if key == "strategies":
                grid[key] = value.split(",")
            elif key == "k":
                grid[key] = [int(v) for v in value.split(",")]
            else:
                grid[key] = [v in ("on", "true", "1") for v in value.split(",")]
        else:
            if not os.path.exists(arg):
                raise click.BadParameter(f"not a grid assignment or trace file: {arg!r}")
            files.append(arg)
    if not files:
        raise click.BadParameter("no filtered-trace files given")
    for strategy in grid["strategies"]:
        if strategy not in miners.STRATEGIES:
            raise click.BadParameter(f"unknown strategy {strategy!r}")
    ftraces = _load_ftraces(files)
    rows = miners.sweep(
        ftraces, grid["strategies"], grid["k"], grid["careful_det"],
        timeout=parse_duration(timeout) if timeout else None,
        memory_budget=parse_bytes(memory_budget) if memory_budget else None)
    report.write_sweep_table(rows, output)
    if plot_path:
        report.plot_sweep(rows, plot_path)
    click.echo(report.sweep_table(rows), nl=False)


@main.command("exam")
@click.argument("model_file", type=click.Path(exists=True))
@click.option("--state", required=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def exam_cmd(model_file, state, fmt):
    """Examination-order position of a state (modified EXAM score)."""
    try:
        model = model_io.parse_model(_read(model_file))
        score = metrics.exam_score(model, state)
    except TraceLensError as exc:
        _fail(exc)
    if fmt == "json":
        click.echo(json.dumps({"state": state, "score": score}))
    else:
        click.echo(str(score))


def diff_to_obj(diff: metrics.ModelDiff) -> dict:
    def enc_val(valuation):
        return [model_io.encode_component(c) for c in valuation]

    def enc_trans(t):
        return {"from": enc_val(t[0]), "label": t[1], "to": enc_val(t[2])}

    return {
        "states_only_a": [enc_val(v) for v in diff.states_only_a],
        "states_only_b": [enc_val(v) for v in diff.states_only_b],
        "transitions_only_a": [enc_trans(t) for t in diff.transitions_only_a],
        "transitions_only_b": [enc_trans(t) for t in diff.transitions_only_b],
        "shared_states": diff.shared_states,
    }


def diff_to_text(diff: metrics.ModelDiff) -> str:
    def val_text(valuation):
        return "(" + ", ".join(model_io.encode_component(c) for c in valuation) + ")"

    lines = []
    lines.append(f"states only in a ({len(diff.states_only_a)}):")
    lines += [f"  {val_text(v)}" for v in diff.states_only_a]
    lines.append(f"states only in b ({len(diff.states_only_b)}):")
    lines += [f"  {val_text(v)}" for v in diff.states_only_b]
    lines.append(f"transitions only in a ({len(diff.transitions_only_a)}):")
    lines += [f"  {val_text(f)} --{label}--> {val_text(t)}"
              for (f, label, t) in diff.transitions_only_a]
    lines.append(f"transitions only in b ({len(diff.transitions_only_b)}):")
    lines += [f"  {val_text(f)} --{label}--> {val_text(t)}"
              for (f, label, t) in diff.transitions_only_b]
    lines.append(f"shared states: {diff.shared_states}")
    return "".join(line + "\n" for line in lines)


@main.command("diff")
@click.argument("model_a", type=click.Path(exists=True))
@click.argument("model_b", type=click.Path(exists=True))
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def diff_cmd(model_a, model_b, fmt):
    """Structural diff of two models built under the same constraints."""
    try:
        a = model_io.parse_model(_read(model_a))
        b = model_io.parse_model(_read(model_b))
        if not (hasattr(a, "meta") and hasattr(b, "meta")
                and a.meta.kind == "efsm" and b.meta.kind == "efsm"):
            raise click.ClickException("diff requires two efsm documents")
        diff = metrics.diff_models(a, b)
    except TraceLensError as exc:
        _fail(exc)
    if fmt == "json":
        click.echo(json.dumps(diff_to_obj(diff), indent=2))
    else:
        click.echo(diff_to_text(diff), nl=False)


@main.command("serve")
@click.option("--workspace", required=True, type=click.Path())
@click.option("--port", type=int, default=8080, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--console-dir", type=click.Path(exists=True), default=None,
              help="Static web-console bundle to serve at /.")
def serve_cmd(workspace, port, host, console_dir):
    """Serve the analysis workspace over HTTP."""
    from . import server
    try:
        srv = server.make_server(workspace, host=host, port=port, console_dir=console_dir)
    except TraceLensError as exc:
        _fail(exc)
    click.echo(f"serving workspace {workspace} on http://{host}:{srv.server_address[1]}/")
    try:
        srv.serve_forever()
    except KeyboardInterrupt:
        srv.shutdown()


if __name__ == "__main__":
    main()
