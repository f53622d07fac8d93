"""Model statistics, the modified EXAM score, and structural model diff."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .core import EFSM, FSM, Valuation, state_id_sort_key
from .errors import DiffConfigMismatch, ExamUnreachable

Model = Union[EFSM, FSM]


@dataclass(frozen=True)
class ModelStats:
    states: int
    transitions: int
    initials: int
    warnings: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.states, self.transitions, self.initials, self.warnings)


def model_stats(model: Model) -> ModelStats:
    if isinstance(model, FSM):
        return ModelStats(len(model.states), len(model.transitions),
                          1 if model.states else 0, 0)
    return ModelStats(len(model.states), len(model.transitions),
                      len(model.initial_states()), len(model.warnings))


def _initial_ids(model: Model) -> list[str]:
    if isinstance(model, FSM):
        return [model.initial] if model.states else []
    return sorted((s.id for s in model.initial_states()), key=state_id_sort_key)


def exam_score(model: Model, faulty_state: str) -> int:
    """1-based position of the state in a fixed breadth-first examination order.

    Initial states seed the queue in id order; neighbors expand in
    (label, target id) order. The traversal order is the tool's stand-in for
    "states examined before the fault is found".
    """
    all_ids = set(model.states) if isinstance(model, FSM) else {s.id for s in model.states}
    if faulty_state not in all_ids:
        raise ExamUnreachable(f"state {faulty_state!r} is not in the model")
    outgoing: dict[str, list[tuple[str, str]]] = {}
    for (src, dst, label) in model.transitions:
        outgoing.setdefault(src, []).append((label, dst))
    for src in outgoing:
        outgoing[src].sort(key=lambda pair: (pair[0], state_id_sort_key(pair[1])))

    visited: list[str] = []
    seen = set()
    queue = list(_initial_ids(model))
    seen.update(queue)
    while queue:
        sid = queue.pop(0)
        visited.append(sid)
        if sid == faulty_state:
            return len(visited)
        for (_label, dst) in outgoing.get(sid, ()):
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
    raise ExamUnreachable(f"state {faulty_state!r} is unreachable from the initial states")


@dataclass(frozen=True)
class ModelDiff:
    """Set differences under valuation keys; empty iff the models are
    isomorphic under valuation identity."""

    states_only_a: tuple[Valuation, ...]
    states_only_b: tuple[Valuation, ...]
    transitions_only_a: tuple[tuple[Valuation, str, Valuation], ...]
    transitions_only_b: tuple[tuple[Valuation, str, Valuation], ...]
    shared_states: int

    def is_empty(self) -> bool:
        return not (self.states_only_a or self.states_only_b
                    or self.transitions_only_a or self.transitions_only_b)


def _valuation_transitions(model: EFSM) -> set[tuple[Valuation, str, Valuation]]:
    by_id = {s.id: s.valuation for s in model.states}
    return {(by_id[src], label, by_id[dst]) for (src, dst, label) in model.transitions}


def _sort_key(valuation: Valuation):
    return tuple(str(c) for c in valuation)


def diff_models(a: EFSM, b: EFSM) -> ModelDiff:
    if a.meta.constraints != b.meta.constraints:
        raise DiffConfigMismatch(
            f"models built under different constraint lists: "
            f"{list(a.meta.constraints)} vs {list(b.meta.constraints)}")
    vals_a = {s.valuation for s in a.states}
    vals_b = {s.valuation for s in b.states}
    trans_a = _valuation_transitions(a)
    trans_b = _valuation_transitions(b)
    return ModelDiff(
        states_only_a=tuple(sorted(vals_a - vals_b, key=_sort_key)),
        states_only_b=tuple(sorted(vals_b - vals_a, key=_sort_key)),
        transitions_only_a=tuple(sorted(trans_a - trans_b,
                                        key=lambda t: (_sort_key(t[0]), t[1], _sort_key(t[2])))),
        transitions_only_b=tuple(sorted(trans_b - trans_a,
                                        key=lambda t: (_sort_key(t[0]), t[1], _sort_key(t[2])))),
        shared_states=len(vals_a & vals_b),
    )
