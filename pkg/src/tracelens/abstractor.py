"""Fold filtered traces into a valuation-keyed state machine, incrementally.

Each admitted step either self-loops, moves to an existing state, or creates
a new one; the valuation is the state identity. Inadmissible steps are
skipped without drawing an edge: when the walk re-enters the admitted
region it resumes at that valuation as a second initial-like entry point.

Residency bookkeeping: a state covers the raw events from the seq where the
walk entered it up to the seq just before the exit boundary that left it
(the exit event of a crossing call belongs to the state it revealed). The
segments of all states therefore partition the admitted portion of a trace.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .constraints import admits, evaluate, valuation_label
from .core import (ConcreteTrace, EFSM, ModelMeta, MonitorConfig, State, TraceEvent,
                   Valuation, Warning_)
from .errors import AbstractConfigMismatch, ZoomMissingTrace
from .traces import FilteredTrace, Step, WalkSink, walk_changes


def meta_for(config: MonitorConfig) -> ModelMeta:
    return ModelMeta(
        kind="efsm",
        config_name=config.name,
        constraints=tuple(config.constraint_texts()),
        filters=tuple(config.filter_texts()),
        eq_epsilon=config.eq_epsilon,
    )


def _check_compatible(meta: ModelMeta, config: MonitorConfig):
    want = meta_for(config)
    if (meta.constraints, meta.filters, meta.eq_epsilon) != (
            want.constraints, want.filters, want.eq_epsilon):
        raise AbstractConfigMismatch(
            f"model built under constraints {list(meta.constraints)}, "
            f"config has {list(want.constraints)}")


class _StateAcc:
    __slots__ = ("id", "valuation", "label", "initial", "segments")

    def __init__(self, sid: str, valuation: Valuation, label: str, initial: bool):
        self.id = sid
        self.valuation = valuation
        self.label = label
        self.initial = initial
        self.segments: list[tuple[str, int, int]] = []


class ModelBuilder:
    """Accumulates states/transitions across appended traces."""

    def __init__(self, config: MonitorConfig, base: Optional[EFSM] = None):
        self.config = config
        self.by_valuation: dict[Valuation, _StateAcc] = {}
        self.transitions: set[tuple[str, str, str]] = set()
        self.warnings: set[Warning_] = set()
        if base is not None:
            _check_compatible(base.meta, config)
            for s in base.states:
                acc = _StateAcc(s.id, s.valuation, s.label, s.initial)
                acc.segments = list(s.segments)
                self.by_valuation[s.valuation] = acc
            self.transitions = set(base.transitions)
            self.warnings = set(base.warnings)

    def _state(self, valuation: Valuation, initial: bool) -> _StateAcc:
        acc = self.by_valuation.get(valuation)
        if acc is None:
            acc = _StateAcc(f"s{len(self.by_valuation)}", valuation,
                            valuation_label(valuation, self.config), initial)
            self.by_valuation[valuation] = acc
        elif initial and not acc.initial:
            acc.initial = True
        return acc

    def walk_trace(self, trace_id: str, first_seq: Optional[int],
                   initial_vars: Optional[dict], steps: Iterable[Step],
                   last_seq_ref) -> None:
        """Feed one trace's admitted steps; last_seq_ref() is read after steps end."""
        cfg = self.config
        cur: Optional[_StateAcc] = None
        seg_start: Optional[int] = None

        def close(end_seq: int):
            if cur is not None and seg_start is not None and end_seq >= seg_start:
                seg = (trace_id, seg_start, end_seq)
                if seg not in cur.segments:
                    cur.segments.append(seg)

        if initial_vars is not None and admits(initial_vars, cfg.filters, cfg.eq_epsilon):
            cur = self._state(evaluate(initial_vars, cfg), initial=True)
            seg_start = first_seq

        for step in steps:
            enter_seq, exit_seq = step.span
            if not admits(step.vars, cfg.filters, cfg.eq_epsilon):
                close(enter_seq - 1)
                cur = None
                seg_start = None
                continue
            val = evaluate(step.vars, cfg)
            if cur is None:
                cur = self._state(val, initial=True)
                seg_start = exit_seq
            elif val == cur.valuation:
                self.transitions.add((cur.id, cur.id, step.fn))
            else:
                nxt = self._state(val, initial=False)
                self.transitions.add((cur.id, nxt.id, step.fn))
                close(exit_seq - 1)
                cur = nxt
                seg_start = exit_seq

        last = last_seq_ref()
        if cur is not None and last is not None:
            close(last)

    def add_warnings(self, warnings: Iterable[Warning_]):
        self.warnings.update(warnings)

    def finish(self) -> EFSM:
        accs = sorted(self.by_valuation.values(), key=lambda a: int(a.id[1:]))
        states = tuple(State(a.id, a.valuation, a.label, a.initial, tuple(a.segments))
                       for a in accs)
        warns = tuple(sorted(self.warnings,
                             key=lambda w: (w.trace_id, w.seq, w.field, w.fn)))
        return EFSM(states=states, transitions=frozenset(self.transitions),
                    meta=meta_for(self.config), warnings=warns)


def abstract_append(model: Optional[EFSM], ftrace: FilteredTrace,
                    config: MonitorConfig) -> EFSM:
    """Append one filtered trace; the input model is not mutated."""
    builder = ModelBuilder(config, base=model)
    events = ftrace.origin.events
    first_seq = events[0].seq if events else None
    initial_vars = ftrace.initial_vars() if events else None
    last_seq = events[-1].seq if events else None
    builder.walk_trace(ftrace.id, first_seq, initial_vars, ftrace.steps, lambda: last_seq)
    builder.add_warnings(ftrace.unexplained)
    return builder.finish()


def build_model(ftraces: Iterable[FilteredTrace], config: MonitorConfig) -> EFSM:
    """Fold abstract_append over the traces (empty list gives an empty model)."""
    builder = ModelBuilder(config)
    for ft in ftraces:
        events = ft.origin.events
        first_seq = events[0].seq if events else None
        initial_vars = ft.initial_vars() if events else None
        last_seq = events[-1].seq if events else None
        builder.walk_trace(ft.id, first_seq, initial_vars, ft.steps, lambda: last_seq)
        builder.add_warnings(ft.unexplained)
    return builder.finish()


def abstract_stream(events: Iterable[TraceEvent], config: MonitorConfig,
                    trace_id: str) -> EFSM:
    """Filter and abstract a single trace in one pass without materializing it.

    Memory stays proportional to the model (plus call depth); use this for
    very long traces.
    """
    builder = ModelBuilder(config)
    sink = WalkSink(trace_id=trace_id)
    steps = walk_changes(events, config.fields, config.eq_epsilon, sink,
                         selected_fns=frozenset(config.functions))

    # Prime the walk so sink.first_vars/first_seq are filled (they are set on
    # the first event, before any step can be yielded); then re-chain the
    # prefetched step. An empty event stream leaves them None -> empty model.
    iterator = iter(steps)
    prefetched = list()
    try:
        prefetched.append(next(iterator))
    except StopIteration:
        pass

    def chained():
        yield from prefetched
        yield from iterator

    builder.walk_trace(trace_id, sink.first_seq, sink.first_vars, chained(),
                       lambda: sink.last_seq)
    builder.add_warnings(sink.unexplained)
    return builder.finish()


# --- composite-state zoom -----------------------------------------------------


@dataclass(frozen=True)
class ZoomNode:
    id: str
    trace_id: str
    seq: int
    kind: str
    fn: str
    vars: dict

    def __hash__(self):
        return hash(self.id)


@dataclass
class ZoomMachine:
    """Concrete sub-machine inside one abstract state: disjoint event paths."""

    nodes: list[ZoomNode]
    edges: list[tuple[str, str, str]]  # (from node, to node, raw fn of the arrival)
    entries: list[str]  # first node of each residency segment

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)


def zoom(model: EFSM, state_id: str, raw_traces: Iterable[ConcreteTrace]) -> ZoomMachine:
    """Expand a state to the raw events its residency segments cover."""
    state = model.state_by_id(state_id)
    by_id = {t.id: t for t in raw_traces}
    nodes: list[ZoomNode] = []
    edges: list[tuple[str, str, str]] = []
    entries: list[str] = []
    segments = sorted(state.segments, key=lambda seg: (seg[0], seg[1]))
    for (tid, start, end) in segments:
        trace = by_id.get(tid)
        if trace is None:
            raise ZoomMissingTrace(f"state {state_id} covers trace {tid!r}, not provided")
        span = [ev for ev in trace.events if start <= ev.seq <= end]
        prev_id = None
        for ev in span:
            nid = f"{tid}:{ev.seq}"
            nodes.append(ZoomNode(nid, tid, ev.seq, ev.kind, ev.fn, ev.vars))
            if prev_id is None:
                entries.append(nid)
            else:
                edges.append((prev_id, nid, ev.fn))
            prev_id = nid
    return ZoomMachine(nodes=nodes, edges=edges, entries=entries)
