import itertools

import pytest

from tracelens import abstractor, demo, traces
from tracelens.abstractor import abstract_append, abstract_stream, build_model, zoom
from tracelens.constraints import evaluate, parse_constraint, parse_filter
from tracelens.core import ConcreteTrace, MonitorConfig, TraceEvent
from tracelens.errors import AbstractConfigMismatch, ZoomMissingTrace
from tracelens.traces import filter_trace

from util import gen_nested_trace, FIELDS


def signature(model):
    """Valuation-keyed shape, independent of state ids and segment order."""
    by_id = {s.id: s.valuation for s in model.states}
    return (
        frozenset((s.valuation, s.initial, frozenset(s.segments)) for s in model.states),
        frozenset((by_id[a], label, by_id[b]) for (a, b, label) in model.transitions),
        frozenset(model.warnings),
    )


def test_fig1_two_states_three_transitions(fig1_ftrace, fig1_config):
    model = abstract_append(None, fig1_ftrace, fig1_config)
    assert len(model.states) == 2
    onground = model.state_by_valuation(("LT",))
    takenoff = model.state_by_valuation(("GT",))
    assert onground.initial and not takenoff.initial
    assert model.transitions == {
        (onground.id, onground.id, "accelerate"),
        (onground.id, onground.id, "takeoff"),
        (onground.id, takenoff.id, "takeoff"),
    }
    assert onground.label == "altitude < 0"


def test_empty_filtered_trace_yields_single_initial_state(takeoff_trace, fig1_config):
    cfg = MonitorConfig(name="fig1", fields=("altitude", "speed"),
                        functions=("retractGear",),  # never called in this scenario
                        constraints=fig1_config.constraints)
    ft = filter_trace(takeoff_trace, cfg)
    assert ft.steps == []
    model = abstract_append(None, ft, cfg)
    assert len(model.states) == 1
    assert model.states[0].initial
    assert model.transitions == frozenset()
    # residency covers the whole trace
    (seg,) = model.states[0].segments
    assert seg == (takeoff_trace.id, 0, takeoff_trace.events[-1].seq)


def test_reappending_same_trace_is_idempotent(fig1_ftrace, fig1_config):
    once = abstract_append(None, fig1_ftrace, fig1_config)
    twice = abstract_append(once, fig1_ftrace, fig1_config)
    assert signature(once) == signature(twice)
    assert {s.id for s in once.states} == {s.id for s in twice.states}


def test_input_model_is_not_mutated(fig1_ftrace, fig1_config, gear_trace, table1_config):
    base = abstract_append(None, fig1_ftrace, fig1_config)
    before = signature(base)
    other = filter_trace(gear_trace,
                         MonitorConfig(name="fig1", fields=("altitude", "speed"),
                                       functions=("accelerate", "takeoff"),
                                       constraints=fig1_config.constraints))
    abstract_append(base, other, fig1_config)
    assert signature(base) == before


def test_config_mismatch_rejected(fig1_ftrace, fig1_config, table1_config):
    model = abstract_append(None, fig1_ftrace, fig1_config)
    with pytest.raises(AbstractConfigMismatch) as exc:
        abstract_append(model, fig1_ftrace, table1_config)
    assert exc.value.code == "ABSTRACT_CONFIG_MISMATCH"


def test_combined_constraints_project_onto_templates(gear_trace, table1_config):
    ft = filter_trace(gear_trace, table1_config)
    model = build_model([ft], table1_config)
    assert 3 <= len(model.states) <= 12
    vals = [s.valuation for s in model.states]
    assert {v[0] for v in vals} == {0, 1}  # gear value-change projection
    assert {v[1] for v in vals} <= {"LT", "EQ", "GT"}
    assert {"LT", "GT"} <= {v[1] for v in vals}
    assert {"BELOW", "WITHIN", "ABOVE"} <= {v[2] for v in vals}


def test_build_model_idempotent_over_repeats(fig1_ftrace, fig1_config):
    one = build_model([fig1_ftrace], fig1_config)
    two = build_model([fig1_ftrace, fig1_ftrace], fig1_config)
    assert signature(one) == signature(two)


def test_build_model_zero_traces_is_empty(fig1_config):
    model = build_model([], fig1_config)
    assert model.states == () and model.transitions == frozenset()


def test_buggy_path_adds_gear_edge_absent_from_correct(gear_trace, buggy_trace,
                                                       table1_config):
    good = build_model([filter_trace(gear_trace, table1_config)], table1_config)
    bad = build_model([filter_trace(buggy_trace, table1_config)], table1_config)

    def gear_edges(model):
        by_id = {s.id: s.valuation for s in model.states}
        return {(by_id[a], by_id[b]) for (a, b, label) in model.transitions
                if label == "retractGear"}

    only_bad = gear_edges(bad) - gear_edges(good)
    assert len(only_bad) == 1
    ((src, _dst),) = only_bad
    assert src[2] == "WITHIN"  # retract happened below the safe altitude


def test_trace_order_invariance(table1_config):
    scenarios = ["takeoff", "takeoff_with_gear", "buggy_takeoff", "full_flight"]
    fts = []
    for i, name in enumerate(scenarios):
        t = demo.run_scenario(demo.FlightScenario(name=name), trace_id=f"t{i}")
        fts.append(filter_trace(t, table1_config))
    base = signature(build_model(fts, table1_config))
    for perm in itertools.permutations(fts):
        assert signature(build_model(list(perm), table1_config)) == base


def test_state_count_bounded_by_observed_component_domains(gear_trace, table1_config):
    ft = filter_trace(gear_trace, table1_config)
    model = build_model([ft], table1_config)
    observed = [set() for _ in table1_config.constraints]
    snaps = [ft.initial_vars()] + [s.vars for s in ft.steps]
    for snap in snaps:
        for i, comp in enumerate(evaluate(snap, table1_config)):
            observed[i].add(comp)
    bound = 1
    for dom in observed:
        bound *= max(1, len(dom))
    assert len(model.states) <= bound


def test_replay_soundness(gear_trace, table1_config):
    ft = filter_trace(gear_trace, table1_config)
    model = build_model([ft], table1_config)
    cur = model.state_by_valuation(evaluate(ft.initial_vars(), table1_config))
    assert cur is not None and cur.initial
    for step in ft.steps:
        val = evaluate(step.vars, table1_config)
        nxt = model.state_by_valuation(val)
        assert nxt is not None
        assert (cur.id, nxt.id, step.fn) in model.transitions or \
            (val == cur.valuation and (cur.id, cur.id, step.fn) in model.transitions)
        cur = nxt


def test_streaming_matches_materialized(gear_trace, table1_config):
    ft = filter_trace(gear_trace, table1_config)
    materialized = build_model([ft], table1_config)
    streamed = abstract_stream(iter(gear_trace.events), table1_config, gear_trace.id)
    assert signature(streamed) == signature(materialized)


def test_streaming_matches_materialized_on_random_traces():
    cfg = MonitorConfig(name="r", fields=FIELDS,
                        functions=("alpha", "beta", "gamma", "delta"),
                        constraints=(parse_constraint("cmp(f0, 0)"),
                                     parse_constraint("value_change(f1)")))
    for seed in range(15):
        trace = gen_nested_trace(seed, trace_id=f"s{seed}")
        a = build_model([filter_trace(trace, cfg)], cfg)
        b = abstract_stream(iter(trace.events), cfg, trace.id)
        assert signature(a) == signature(b), f"seed {seed}"


# --- filters during abstraction ---


def _flat_call(seq, fn, x):
    return [TraceEvent(seq, "enter", fn, 0, {"x": x[0]}, {}),
            TraceEvent(seq + 1, "exit", fn, 0, {"x": x[1]})]


def gap_trace():
    """x walks 5 -> 50 (inadmissible) -> 7; filter admits [0, 10]."""
    events = (_flat_call(0, "set5", (5, 5))
              + _flat_call(2, "jump", (5, 50))
              + _flat_call(4, "back", (50, 7)))
    return ConcreteTrace("gap", events, ("x",))


def gap_config():
    return MonitorConfig(name="g", fields=("x",), functions=("set5", "jump", "back"),
                         constraints=(parse_constraint("cmp(x, 6)"),),
                         filters=(parse_filter("filter(x, 0, 10)"),))


def test_filtered_gap_creates_second_entry_point_without_edge():
    cfg = gap_config()
    model = build_model([filter_trace(gap_trace(), cfg)], cfg)
    lt = model.state_by_valuation(("LT",))
    gt = model.state_by_valuation(("GT",))
    assert lt is not None and gt is not None
    assert lt.initial and gt.initial  # re-entry is a second initial-like state
    assert model.transitions == frozenset()  # no edge across the ignored region


def test_inadmissible_spans_have_no_residency():
    cfg = gap_config()
    model = build_model([filter_trace(gap_trace(), cfg)], cfg)
    covered = set()
    for s in model.states:
        for (_tid, a, b) in s.segments:
            covered.update(range(a, b + 1))
    assert 2 not in covered and 3 not in covered  # the jump call is ignored


# --- warnings ---


def test_model_warnings_deduplicate_on_reappend(takeoff_trace):
    cfg = MonitorConfig(name="w", fields=("altitude",), functions=("accelerate",),
                        constraints=(parse_constraint("cmp(altitude, 0)"),))
    ft = filter_trace(takeoff_trace, cfg)
    assert ft.unexplained
    once = abstract_append(None, ft, cfg)
    twice = abstract_append(once, ft, cfg)
    assert once.warnings == twice.warnings
    assert {w.fn for w in once.warnings} == {"takeoff"}


# --- zoom ---


def test_zoom_onground_reveals_hidden_noop_calls(fig1_ftrace, fig1_config, takeoff_trace):
    model = abstract_append(None, fig1_ftrace, fig1_config)
    onground = model.state_by_valuation(("LT",))
    machine = zoom(model, onground.id, [takeoff_trace])
    noop_takeoffs = [n for n in machine.nodes
                     if n.fn == "takeoff" and n.vars["speed"] < 30.0]
    assert noop_takeoffs  # the filtered view hid these calls; zoom shows them
    assert machine.entries[0] == f"{takeoff_trace.id}:0"


def test_zoom_two_event_segment_is_two_node_path():
    events = _flat_call(0, "f", (1, 1))
    trace = ConcreteTrace("tiny", events, ("x",))
    cfg = MonitorConfig(name="t", fields=("x",), functions=("f",),
                        constraints=(parse_constraint("value_change(x)"),))
    model = build_model([filter_trace(trace, cfg)], cfg)
    (state,) = model.states
    machine = zoom(model, state.id, [trace])
    assert machine.node_count == 2 and machine.edge_count == 1


def test_zoom_reconstructs_admitted_trace(gear_trace, table1_config):
    ft = filter_trace(gear_trace, table1_config)
    model = build_model([ft], table1_config)
    pieces = []
    for state in model.states:
        machine = zoom(model, state.id, [gear_trace])
        for node in machine.nodes:
            pieces.append(node.seq)
    assert sorted(pieces) == [ev.seq for ev in gear_trace.events]


def test_zoom_missing_trace_raises(fig1_ftrace, fig1_config):
    model = abstract_append(None, fig1_ftrace, fig1_config)
    with pytest.raises(ZoomMissingTrace) as exc:
        zoom(model, model.states[0].id, [])
    assert exc.value.code == "ZOOM_MISSING_TRACE"
