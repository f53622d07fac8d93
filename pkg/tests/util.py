"""Shared test helpers: random trace generation and brute-force oracles."""
from __future__ import annotations

import random

from tracelens.core import ConcreteTrace, TraceEvent, values_equal
from tracelens.traces import ROOT_FN

FIELDS = ("f0", "f1", "f2")
FNS = ("alpha", "beta", "gamma", "delta")


def gen_nested_trace(seed: int, depth_max: int = 6, top_calls: int | None = None,
                     trace_id: str | None = None) -> ConcreteTrace:
    """Random well-nested trace whose snapshots come from one evolving state."""
    rng = random.Random(seed)
    state = {f: rng.randint(-2, 2) for f in FIELDS}
    events: list[TraceEvent] = []
    seq = 0

    def emit(kind: str, fn: str, depth: int):
        nonlocal seq
        events.append(TraceEvent(seq, kind, fn, depth, dict(state),
                                 {} if kind == "enter" else None))
        seq += 1

    def call(depth: int):
        fn = rng.choice(FNS)
        emit("enter", fn, depth)
        for _ in range(rng.randint(0, 3)):
            if rng.random() < 0.5 and depth + 1 <= depth_max:
                call(depth + 1)
            else:
                state[rng.choice(FIELDS)] += rng.choice([-1, 1])
        emit("exit", fn, depth)

    for _ in range(top_calls or rng.randint(1, 4)):
        if rng.random() < 0.2:
            state[rng.choice(FIELDS)] += 1  # change between top-level calls
        call(0)
    return ConcreteTrace(trace_id or f"rand{seed}", events, FIELDS)


def spans_of(events):
    """All (enter index, exit index, fn, depth) spans; open calls close at the end."""
    stack, spans = [], []
    for i, ev in enumerate(events):
        if ev.kind == "enter":
            stack.append((i, ev))
        else:
            j, _ = stack.pop()
            spans.append((j, i, ev.fn, ev.depth))
    while stack:
        j, enter = stack.pop()
        spans.append((j, len(events) - 1, enter.fn, enter.depth))
    return spans


def oracle_attribution(trace: ConcreteTrace, fields, eps: float = 0.0):
    """Brute force: per consecutive-snapshot difference, walk the nesting stack
    and pick the deepest bracketing span whose endpoints differ on the field."""
    events = trace.events
    spans = spans_of(events)
    records = []
    for i in range(len(events) - 1):
        a, b = events[i], events[i + 1]
        for f in fields:
            if values_equal(a.vars[f], b.vars[f], eps):
                continue
            cands = [s for s in spans
                     if events[s[0]].seq <= a.seq and b.seq <= events[s[1]].seq]
            cands.sort(key=lambda s: -s[3])
            hit = None
            for (ei, xi, fn, depth) in cands:
                if not values_equal(events[ei].vars[f], events[xi].vars[f], eps):
                    hit = (f, b.seq, fn, depth)
                    break
            records.append(hit or (f, b.seq, ROOT_FN, -1))
    return sorted(records)


def consecutive_diff_count(trace: ConcreteTrace, field: str, eps: float = 0.0) -> int:
    events = trace.events
    return sum(1 for i in range(len(events) - 1)
               if not values_equal(events[i].vars[field], events[i + 1].vars[field], eps))
