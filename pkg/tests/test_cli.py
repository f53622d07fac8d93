import json

import pytest
from click.testing import CliRunner

from tracelens.cli import main, parse_bytes, parse_duration
from tracelens.model_io import parse_model, serialize_config


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, *args):
    result = runner.invoke(main, list(args), catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return result


def write_fig1_config(path):
    from tracelens.constraints import parse_constraint
    from tracelens.core import MonitorConfig
    cfg = MonitorConfig(name="fig1", fields=("altitude", "speed"),
                        functions=("accelerate", "takeoff"),
                        constraints=(parse_constraint("cmp(altitude, 0)"),))
    with open(path, "w") as handle:
        handle.write(serialize_config(cfg))


def test_duration_and_bytes_parsing():
    assert parse_duration("20m") == 1200.0
    assert parse_duration("2s") == 2.0
    assert parse_duration("500ms") == 0.5
    assert parse_bytes("64MiB") == 64 * 1024 * 1024
    assert parse_bytes("1000") == 1000


def test_full_pipeline(tmp_path, runner):
    trc = tmp_path / "takeoff.trc"
    manifest = tmp_path / "demo.manifest"
    cfg = tmp_path / "fig1.cfg.json"
    ftrc = tmp_path / "takeoff.ftrc"
    model = tmp_path / "model.json"
    dot = tmp_path / "model.dot"

    invoke(runner, "demo", "--scenario", "takeoff", "-o", str(trc),
           "--symbols", str(manifest))
    assert trc.exists() and manifest.exists()
    assert "gear" in manifest.read_text()

    write_fig1_config(cfg)
    invoke(runner, "filter", str(trc), "--config", str(cfg), "-o", str(ftrc))
    out = invoke(runner, "abstract", str(ftrc), "--config", str(cfg),
                 "-o", str(model), "--dot", str(dot))
    assert "2 states, 3 transitions" in out.output
    doc = parse_model(model.read_text())
    assert len(doc.states) == 2
    assert "digraph" in dot.read_text()

    mined = tmp_path / "mined.json"
    invoke(runner, "mine", str(ftrc), "--strategy", "ktails", "--k", "2",
           "--careful-det", "-o", str(mined))
    fsm = parse_model(mined.read_text())
    assert len(fsm.states) > 2

    exam = invoke(runner, "exam", str(model), "--state", "s1")
    assert exam.output.strip() == "2"
    exam_json = invoke(runner, "exam", str(model), "--state", "s1", "--format", "json")
    assert json.loads(exam_json.output) == {"state": "s1", "score": 2}


def test_demo_param_overrides(tmp_path, runner):
    trc = tmp_path / "short.trc"
    result = invoke(runner, "demo", "--scenario", "takeoff", "--param", "ticks=1",
                    "-o", str(trc))
    assert "6 events ->" in result.output
    n_lines = len(trc.read_text().splitlines())
    assert n_lines == 6  # one tick, two nested calls, two events each


def test_diff_text_and_json(tmp_path, runner):
    from tracelens.constraints import parse_constraint
    from tracelens.core import MonitorConfig
    from tracelens import demo as demo_mod

    cfg_path = tmp_path / "t1.cfg.json"
    cons = ("value_change(gear)", "cmp(speed, takeOffSpeed)",
            "range(altitude, groundAlt, safeAltForGearRetract)")
    cfg = MonitorConfig(name="t1", fields=demo_mod.FIELD_ORDER,
                        functions=("accelerate", "takeoff", "retractGear"),
                        constraints=tuple(parse_constraint(c) for c in cons))
    cfg_path.write_text(serialize_config(cfg))

    paths = {}
    for scenario in ("takeoff_with_gear", "buggy_takeoff"):
        trc = tmp_path / f"{scenario}.trc"
        ftrc = tmp_path / f"{scenario}.ftrc"
        model = tmp_path / f"{scenario}.model.json"
        invoke(runner, "demo", "--scenario", scenario, "-o", str(trc))
        invoke(runner, "filter", str(trc), "--config", str(cfg_path), "-o", str(ftrc))
        invoke(runner, "abstract", str(ftrc), "--config", str(cfg_path), "-o", str(model))
        paths[scenario] = model

    text = invoke(runner, "diff", str(paths["takeoff_with_gear"]),
                  str(paths["buggy_takeoff"]))
    assert "transitions only in b (1):" in text.output
    as_json = invoke(runner, "diff", str(paths["takeoff_with_gear"]),
                     str(paths["buggy_takeoff"]), "--format", "json")
    doc = json.loads(as_json.output)
    assert len(doc["transitions_only_b"]) == 1
    assert doc["transitions_only_b"][0]["label"] == "retractGear"


def test_mine_sweep_table_and_plot(tmp_path, runner):
    trc = tmp_path / "takeoff.trc"
    cfg = tmp_path / "fig1.cfg.json"
    ftrc = tmp_path / "takeoff.ftrc"
    results = tmp_path / "results.tsv"
    plot = tmp_path / "sweep.png"
    invoke(runner, "demo", "--scenario", "takeoff", "-o", str(trc))
    write_fig1_config(cfg)
    invoke(runner, "filter", str(trc), "--config", str(cfg), "-o", str(ftrc))
    out = invoke(runner, "mine-sweep", "--grid", "strategies=ktails,redblue", "k=0,1",
                 "careful_det=on", str(ftrc), "-o", str(results), "--plot", str(plot))
    lines = results.read_text().splitlines()
    assert lines[0].startswith("strategy\t")
    assert len(lines) == 1 + 2 * 2 * 1
    assert all(line.split("\t")[3] == "ok" for line in lines[1:])
    assert plot.read_bytes()[:4] == b"\x89PNG"
    assert "ktails" in out.output


def test_extract_symbols_cli(tmp_path, runner):
    src = tmp_path / "src"
    src.mkdir()
    (src / "a.c").write_text("int gear; void takeoff() {}\n")
    (src / "b.h").write_text("float speed;\n")
    manifest = tmp_path / "out.manifest"
    skipped = tmp_path / "skipped.txt"
    out = invoke(runner, "extract-symbols", str(src), "-o", str(manifest),
                 "--skipped-report", str(skipped))
    assert "2 fields, 1 functions" in out.output
    body = manifest.read_text()
    assert "field gear int" in body and "field speed float" in body


def test_cli_errors_carry_codes(tmp_path, runner):
    bad = tmp_path / "bad.trc"
    bad.write_text("{not json\n")
    cfg = tmp_path / "fig1.cfg.json"
    write_fig1_config(cfg)
    result = runner.invoke(main, ["filter", str(bad), "--config", str(cfg),
                                  "-o", str(tmp_path / "x.ftrc")])
    assert result.exit_code != 0
    assert "TRACE_PARSE" in result.output
