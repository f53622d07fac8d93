"""Trace parsing, change attribution, and selected-call filtering.

Line format, one event per line (enter lines carry `args`, exit lines do not):

    {"seq":0,"kind":"enter","fn":"tick","depth":0,"vars":{"speed":0.0},"args":{}}

Attribution walks the call nesting in a single forward pass: each observed
difference between consecutive snapshots starts pending on the innermost open
invocation and escalates to enclosing invocations until one's own
enter/exit endpoints differ on that field. Changes that no real invocation
explains land on the virtual root span ROOT_FN (depth -1).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .core import ConcreteTrace, MonitorConfig, Scalar, TraceEvent, Warning_, values_equal
from .errors import FilterFieldsError, TraceNestingError, TraceParseError

ROOT_FN = "<root>"

_EVENT_KEYS = ("seq", "kind", "fn", "depth", "vars", "args")


def iter_parse_lines(lines: Iterable[str]) -> Iterator[TraceEvent]:
    """Parse and validate trace lines incrementally (nesting, seq order)."""
    stack: list[tuple[str, int]] = []
    last_seq: Optional[int] = None
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TraceParseError(f"invalid JSON: {exc.msg}", line_no) from None
        if not isinstance(obj, dict):
            raise TraceParseError("event is not an object", line_no)
        for key in ("seq", "kind", "fn", "depth", "vars"):
            if key not in obj:
                raise TraceParseError(f"missing key {key!r}", line_no)
        unknown = set(obj) - set(_EVENT_KEYS)
        if unknown:
            raise TraceParseError(f"unknown keys {sorted(unknown)}", line_no)
        seq, kind, fn, depth = obj["seq"], obj["kind"], obj["fn"], obj["depth"]
        if not isinstance(seq, int) or not isinstance(depth, int) or depth < 0:
            raise TraceParseError("seq/depth must be non-negative integers", line_no)
        if kind not in ("enter", "exit"):
            raise TraceParseError(f"bad kind {kind!r}", line_no)
        if not isinstance(obj["vars"], dict):
            raise TraceParseError("vars must be an object", line_no)
        if kind == "exit" and "args" in obj:
            raise TraceParseError("exit events must not carry args", line_no)
        if last_seq is not None and seq <= last_seq:
            raise TraceParseError(f"seq not increasing: {seq} after {last_seq}", line_no)
        last_seq = seq

        if kind == "enter":
            if depth != len(stack):
                raise TraceNestingError(
                    f"enter of {fn!r} at depth {depth}, expected {len(stack)}", seq)
            stack.append((fn, depth))
        else:
            if not stack:
                raise TraceNestingError(f"exit of {fn!r} without matching enter", seq)
            top_fn, top_depth = stack[-1]
            if top_fn != fn or top_depth != depth:
                raise TraceNestingError(
                    f"exit of {fn!r}@{depth} does not match open enter "
                    f"{top_fn!r}@{top_depth}", seq)
            stack.pop()

        vars_ = {k: (int(v) if isinstance(v, bool) else v) for k, v in obj["vars"].items()}
        args = obj.get("args") if kind == "enter" else None
        yield TraceEvent(seq=seq, kind=kind, fn=fn, depth=depth, vars=vars_, args=args)


def parse_trace(lines: Iterable[str], trace_id: str = "trace") -> ConcreteTrace:
    """Materialize a validated trace; monitored fields come from the first event."""
    events = list(iter_parse_lines(lines))
    monitored: tuple[str, ...] = ()
    if events:
        monitored = tuple(events[0].vars.keys())
        want = set(monitored)
        for ev in events:
            if set(ev.vars.keys()) != want:
                raise TraceParseError(
                    f"event seq {ev.seq} snapshot keys differ from first event", 0)
    return ConcreteTrace(id=trace_id, events=events, monitored_fields=monitored)


def event_to_line(ev: TraceEvent) -> str:
    obj: dict = {"seq": ev.seq, "kind": ev.kind, "fn": ev.fn, "depth": ev.depth,
                 "vars": ev.vars}
    if ev.kind == "enter":
        obj["args"] = ev.args if ev.args is not None else {}
    return json.dumps(obj, separators=(",", ":"))


def serialize_trace(trace: ConcreteTrace) -> str:
    return "".join(event_to_line(ev) + "\n" for ev in trace.events)


@dataclass(frozen=True)
class AttributionRecord:
    field: str
    seq: int  # boundary seq: the event at which the new value is first visible
    fn: str
    depth: int


@dataclass
class ChangeAttribution:
    records: list[AttributionRecord]

    def per_field_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for r in self.records:
            counts[r.field] = counts.get(r.field, 0) + 1
        return counts


@dataclass(frozen=True)
class Step:
    """One filtered invocation: a selected call credited with a monitored change."""

    fn: str
    vars: dict[str, Scalar]  # after-exit snapshot (valuation input)
    span: tuple[int, int]  # (enter seq, exit seq)
    changed: tuple[str, ...]


@dataclass
class FilteredTrace:
    id: str
    steps: list[Step]
    origin: ConcreteTrace
    unexplained: list[Warning_] = field(default_factory=list)

    @property
    def kept_seqs(self) -> list[tuple[int, int]]:
        return [s.span for s in self.steps]

    def initial_vars(self) -> dict[str, Scalar]:
        return self.origin.events[0].vars if self.origin.events else {}

    def labels(self) -> list[str]:
        return [s.fn for s in self.steps]


class _Frame:
    __slots__ = ("fn", "depth", "enter_seq", "enter_vars", "pending")

    def __init__(self, fn: str, depth: int, enter_seq: int, enter_vars):
        self.fn = fn
        self.depth = depth
        self.enter_seq = enter_seq
        self.enter_vars = enter_vars
        self.pending: dict[str, list[int]] = {}


@dataclass
class WalkSink:
    """Results accumulated by the change walk besides the yielded steps."""

    trace_id: str = ""
    collect_records: bool = False
    records: list[AttributionRecord] = field(default_factory=list)
    unexplained: list[Warning_] = field(default_factory=list)
    first_vars: Optional[dict[str, Scalar]] = None
    first_seq: Optional[int] = None
    last_seq: Optional[int] = None
    event_count: int = 0


def _resolve_frame(frame: _Frame, exit_vars, eps: float, parent: _Frame,
                   selected_fns, sink: WalkSink) -> tuple[str, ...]:
    """Close a span: attribute pendings whose endpoints differ, escalate the rest.

    Returns the fields attributed to this frame (its mutator credit).
    """
    credited: list[str] = []
    for f, seqs in frame.pending.items():
        a = frame.enter_vars.get(f)
        b = exit_vars.get(f)
        differs = (a is None) != (b is None) or (a is not None and not values_equal(a, b, eps))
        if differs:
            credited.append(f)
            if sink.collect_records:
                for sq in seqs:
                    sink.records.append(AttributionRecord(f, sq, frame.fn, frame.depth))
            if selected_fns is not None and frame.fn not in selected_fns:
                for sq in seqs:
                    sink.unexplained.append(Warning_(sink.trace_id, sq, f, frame.fn))
        else:
            parent.pending.setdefault(f, []).extend(seqs)
    return tuple(sorted(credited))


def walk_changes(events: Iterable[TraceEvent], fields: Iterable[str], eps: float,
                 sink: WalkSink, selected_fns=None) -> Iterator[Step]:
    """Single forward pass: yields steps (selected, credited, completed calls).

    Memory stays proportional to call depth plus unresolved pendings; events
    are not retained. A trace that ends with open calls (crashed run) resolves
    those frames against the final snapshot but yields no step for them.
    """
    fields = tuple(fields)
    root = _Frame(ROOT_FN, -1, 0, {})
    stack: list[_Frame] = [root]
    prev: Optional[TraceEvent] = None

    for ev in events:
        sink.event_count += 1
        if prev is None:
            sink.first_vars = dict(ev.vars)
            sink.first_seq = ev.seq
            root.enter_seq = ev.seq
            root.enter_vars = ev.vars
        else:
            pv, cv = prev.vars, ev.vars
            top = stack[-1]
            for f in fields:
                if not values_equal(pv[f], cv[f], eps):
                    top.pending.setdefault(f, []).append(ev.seq)
        if ev.kind == "enter":
            stack.append(_Frame(ev.fn, ev.depth, ev.seq, ev.vars))
        else:
            frame = stack.pop()
            credited = _resolve_frame(frame, ev.vars, eps, stack[-1], selected_fns, sink)
            if credited and (selected_fns is None or frame.fn in selected_fns):
                yield Step(fn=frame.fn, vars=dict(ev.vars),
                           span=(frame.enter_seq, ev.seq), changed=credited)
        prev = ev

    if prev is not None:
        sink.last_seq = prev.seq
        while len(stack) > 1:  # crashed trace: close frames against the last snapshot
            frame = stack.pop()
            _resolve_frame(frame, prev.vars, eps, stack[-1], selected_fns, sink)
        # whatever reached the root is attributed there, unconditionally
        for f, seqs in root.pending.items():
            if sink.collect_records:
                for sq in seqs:
                    sink.records.append(AttributionRecord(f, sq, ROOT_FN, -1))
            if selected_fns is not None:
                for sq in seqs:
                    sink.unexplained.append(Warning_(sink.trace_id, sq, f, ROOT_FN))


def attribute_changes(trace: ConcreteTrace, fields: Iterable[str],
                      eps: float = 0.0) -> ChangeAttribution:
    """Attribute every consecutive-snapshot difference to one invocation."""
    fields = tuple(fields)
    missing = set(fields) - set(trace.monitored_fields)
    if missing:
        raise ValueError(f"fields not monitored by trace: {sorted(missing)}")
    sink = WalkSink(trace_id=trace.id, collect_records=True)
    for _step in walk_changes(trace.events, fields, eps, sink):
        pass
    return ChangeAttribution(records=sink.records)


def filter_trace(trace: ConcreteTrace, config: MonitorConfig) -> FilteredTrace:
    """Keep the selected invocations that changed at least one selected field.

    The origin trace is retained in full so composite states stay zoomable.
    """
    missing = set(config.fields) - set(trace.monitored_fields)
    if missing:
        raise FilterFieldsError(
            f"config fields not monitored by trace {trace.id!r}: {sorted(missing)}")
    sink = WalkSink(trace_id=trace.id)
    steps = list(walk_changes(trace.events, config.fields, config.eq_epsilon, sink,
                              selected_fns=frozenset(config.functions)))
    return FilteredTrace(id=trace.id, steps=steps, origin=trace, unexplained=sink.unexplained)


# --- filtered-trace file form (.ftrc) ----------------------------------------


def serialize_filtered(ftrace: FilteredTrace) -> str:
    obj = {
        "id": ftrace.id,
        "steps": [
            {"fn": s.fn, "vars": s.vars, "span": list(s.span), "changed": list(s.changed)}
            for s in ftrace.steps
        ],
        "unexplained": [
            {"trace": w.trace_id, "seq": w.seq, "field": w.field, "fn": w.fn}
            for w in ftrace.unexplained
        ],
        "origin": [json.loads(event_to_line(ev)) for ev in ftrace.origin.events],
    }
    return json.dumps(obj, indent=2) + "\n"


def parse_filtered(text: str) -> FilteredTrace:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TraceParseError(f"invalid filtered trace JSON: {exc.msg}", exc.lineno) from None
    try:
        origin = parse_trace((json.dumps(e, separators=(",", ":")) for e in obj["origin"]),
                             trace_id=obj["id"])
        steps = [Step(fn=s["fn"], vars=s["vars"], span=tuple(s["span"]),
                      changed=tuple(s["changed"])) for s in obj["steps"]]
        unexplained = [Warning_(w["trace"], w["seq"], w["field"], w["fn"])
                       for w in obj["unexplained"]]
    except (KeyError, TypeError) as exc:
        raise TraceParseError(f"bad filtered trace structure: {exc}", 0) from None
    return FilteredTrace(id=obj["id"], steps=steps, origin=origin, unexplained=unexplained)
