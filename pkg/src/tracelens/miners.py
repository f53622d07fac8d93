"""Automated inference baselines: PTA, kTails, blue-fringe, gkTail-lite.

Every miner is budget-enforced: exceeding the time or (estimated) memory
budget raises MINE_TIMEOUT / MINE_OOM instead of running unbounded, and the
sweep runner records the outcome per configuration.

Determinism: state ids follow breadth-first discovery order (edges expanded
in label-lexicographic order) and every merge loop scans candidates in
ascending id order, so each strategy is bit-reproducible.
"""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import FSM, values_equal
from .errors import MineOutOfMemory, MineTimeout
from .traces import FilteredTrace

STRATEGIES = ("ktails", "redblue", "gktail_lite")

# rough per-structure live-byte estimates for the memory budget
_NODE_COST = 160
_EDGE_COST = 64
_TAIL_COST = 96


class Budget:
    """Time/memory guard; tick() is cheap enough to call in inner loops."""

    def __init__(self, timeout: Optional[float] = None,
                 memory_budget: Optional[int] = None):
        self.deadline = (time.monotonic() + timeout) if timeout else None
        self.memory_budget = memory_budget
        self.estimated = 0
        self._n = 0

    def tick(self):
        self._n += 1
        if self.deadline is not None and (self._n & 15) == 0:
            if time.monotonic() > self.deadline:
                raise MineTimeout("mining exceeded its time budget")

    def check_now(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise MineTimeout("mining exceeded its time budget")

    def alloc(self, nbytes: int):
        if self.memory_budget is None:
            return
        self.estimated += nbytes
        if self.estimated > self.memory_budget:
            raise MineOutOfMemory(
                f"mining exceeded its memory budget (~{self.estimated} bytes estimated)")

    def free(self, nbytes: int):
        if self.memory_budget is not None:
            self.estimated -= nbytes


_NO_BUDGET = Budget()


@dataclass(frozen=True)
class MinerParams:
    strategy: str
    k: int = 1
    careful_det: bool = False
    timeout: Optional[float] = None  # seconds
    memory_budget: Optional[int] = None  # bytes

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy: {self.strategy}")
        if self.k < 0:
            raise ValueError("k must be non-negative")

    def budget(self) -> Budget:
        return Budget(self.timeout, self.memory_budget)


class _Machine:
    """Int-id NFA under merging; converted to FSM at the end."""

    def __init__(self):
        self.out: dict[int, dict[str, set[int]]] = {0: {}}
        self.initial = 0

    @classmethod
    def from_fsm(cls, fsm: FSM, budget: Budget = _NO_BUDGET) -> "_Machine":
        from .core import state_id_sort_key
        m = cls()
        index = {sid: i for i, sid in enumerate(
            sorted(fsm.states, key=state_id_sort_key))}
        m.out = {i: {} for i in index.values()}
        m.initial = index[fsm.initial]
        for (src, dst, label) in fsm.transitions:
            budget.tick()
            m.out[index[src]].setdefault(label, set()).add(index[dst])
        return m

    def states(self) -> list[int]:
        return sorted(self.out.keys())

    def merge(self, keep: int, drop: int, budget: Budget = _NO_BUDGET):
        """Redirect drop's edges onto keep and delete drop."""
        if keep == drop:
            return
        dropped = self.out.pop(drop)
        for label, dsts in dropped.items():
            self.out[keep].setdefault(label, set()).update(
                keep if d == drop else d for d in dsts)
        for src, edges in self.out.items():
            budget.tick()
            for label, dsts in edges.items():
                if drop in dsts:
                    dsts.discard(drop)
                    dsts.add(keep)
        if self.initial == drop:
            self.initial = keep

    def determinize(self, budget: Budget, seeds=None):
        """Fold nondeterministic successors together until none remain.

        A merge can only introduce nondeterminism at the surviving state, so
        seeded runs walk a worklist instead of rescanning the machine.
        """
        work = list(seeds) if seeds is not None else self.states()
        while work:
            budget.tick()
            s = work.pop()
            while s in self.out:
                budget.tick()
                hit = None
                for label in sorted(self.out[s]):
                    if len(self.out[s][label]) > 1:
                        hit = sorted(self.out[s][label])
                        break
                if hit is None:
                    break
                keep = hit[0]
                for other in hit[1:]:
                    self.merge(keep, other, budget)
                work.append(keep)

    def to_fsm(self, budget: Budget = _NO_BUDGET) -> FSM:
        """Rename states s0, s1, ... in BFS order (labels lexicographic)."""
        order: dict[int, str] = {}
        queue = deque([self.initial])
        seen = {self.initial}
        while queue:
            budget.tick()
            s = queue.popleft()
            order[s] = f"s{len(order)}"
            for label in sorted(self.out.get(s, ())):
                for dst in sorted(self.out[s][label]):
                    if dst not in seen:
                        seen.add(dst)
                        queue.append(dst)
        for s in self.states():  # unreachable leftovers keep a stable order
            budget.tick()
            if s not in order:
                order[s] = f"s{len(order)}"
        transitions = frozenset(
            (order[src], order[dst], label)
            for src, edges in self.out.items()
            for label, dsts in edges.items()
            for dst in dsts)
        names = tuple(sorted(order.values(), key=lambda x: int(x[1:])))
        return FSM(states=names, initial=order[self.initial], transitions=transitions)


def build_pta(traces: Sequence[Sequence[str]], budget: Budget = _NO_BUDGET) -> FSM:
    """Prefix tree acceptor: accepts exactly the prefix closure of the input."""
    children: list[dict[str, int]] = [{}]
    for trace in traces:
        node = 0
        for label in trace:
            budget.tick()
            nxt = children[node].get(label)
            if nxt is None:
                nxt = len(children)
                children.append({})
                children[node][label] = nxt
                budget.alloc(_NODE_COST + _EDGE_COST)
            node = nxt
    # relabel breadth-first so ids match merge-candidate order
    order: dict[int, int] = {}
    queue = deque([0])
    while queue:
        budget.tick()
        n = queue.popleft()
        order[n] = len(order)
        for label in sorted(children[n]):
            queue.append(children[n][label])
    m = _Machine()
    m.out = {order[n]: {} for n in range(len(children))}
    for n, edges in enumerate(children):
        budget.tick()
        for label, dst in edges.items():
            m.out[order[n]].setdefault(label, set()).add(order[dst])
    return m.to_fsm(budget)


def _tails(m: _Machine, state: int, k: int, budget: Budget) -> frozenset:
    """Outgoing label sequences of length k (shorter if the path dead-ends)."""
    results = set()
    budget.alloc(_TAIL_COST)
    stack = [(state, ())]
    while stack:
        budget.tick()
        s, seq = stack.pop()
        budget.free(_TAIL_COST)
        if len(seq) == k:
            results.add(seq)
            continue
        edges = m.out.get(s, {})
        if not edges:
            results.add(seq)
            continue
        for label in sorted(edges):
            for dst in sorted(edges[label]):
                budget.alloc(_TAIL_COST)
                stack.append((dst, seq + (label,)))
    return frozenset(results)


def ktails(pta: FSM, k: int, careful_det: bool = False,
           budget: Budget = _NO_BUDGET) -> FSM:
    """Merge k-equivalent state pairs to a fixpoint, smallest ids first."""
    m = _Machine.from_fsm(pta, budget)
    while True:
        budget.check_now()
        states = m.states()
        tails = {}
        for s in states:
            tails[s] = _tails(m, s, k, budget)
            budget.alloc(_TAIL_COST * max(1, len(tails[s])))
        merged = False
        for i, a in enumerate(states):
            if merged:
                break
            for b in states[i + 1:]:
                budget.tick()
                if tails[a] == tails[b]:
                    m.merge(a, b, budget)
                    if careful_det:
                        m.determinize(budget, seeds=[a])
                    merged = True
                    break
        for s in states:
            budget.free(_TAIL_COST * max(1, len(tails[s])))
        if not merged:
            return m.to_fsm(budget)


# --- blue-fringe merging -------------------------------------------------------


def _find(rep: list[int], v: int) -> int:
    while rep[v] != v:
        rep[v] = rep[rep[v]]
        v = rep[v]
    return v


class _FoldState:
    """Union-find over PTA nodes plus per-class child maps.

    Class roots are always the smallest node id in the class, so ascending
    root order doubles as the deterministic candidate order.
    """

    def __init__(self, n: int, children: Optional[dict[int, dict[str, int]]] = None):
        self.rep = list(range(n))
        self.children: dict[int, dict[str, int]] = children if children is not None else {}

    def copy(self, budget: Budget) -> "_FoldState":
        budget.alloc(len(self.rep) * 8 + len(self.children) * _NODE_COST)
        dup = _FoldState(0)
        dup.rep = self.rep[:]
        dup.children = {node: dict(edges) for node, edges in self.children.items()}
        return dup

    def release(self, budget: Budget):
        budget.free(len(self.rep) * 8 + len(self.children) * _NODE_COST)

    def child_classes(self, root: int) -> dict[str, int]:
        return {label: _find(self.rep, dst)
                for label, dst in self.children.get(root, {}).items()}

    def fold(self, a: int, b: int, budget: Budget) -> int:
        """Union b's class into a's, aligning children downward; the returned
        count of overlapping transitions is the merge evidence."""
        overlaps = 0
        queue = deque([(a, b)])
        while queue:
            budget.tick()
            x, y = queue.popleft()
            rx, ry = _find(self.rep, x), _find(self.rep, y)
            if rx == ry:
                continue
            keep, drop = (rx, ry) if rx < ry else (ry, rx)
            self.rep[drop] = keep
            dropped = self.children.pop(drop, {})
            mine = self.children.setdefault(keep, {})
            for label, child in dropped.items():
                if label in mine:
                    overlaps += 1
                    queue.append((mine[label], child))
                else:
                    mine[label] = child
        return overlaps


def redblue(pta_fsm: FSM, params: Optional[MinerParams] = None,
            budget: Budget = _NO_BUDGET) -> FSM:
    """Blue-fringe merging on positive evidence only.

    A blue state merges into the red core only when the best fold overlaps at
    least one transition (there is no negative evidence to veto merges, so
    overlap is the only signal); otherwise it is promoted. Ties break toward
    the smallest red id, then the smallest blue id.
    """
    m = _Machine.from_fsm(pta_fsm, budget)
    n = max(m.out.keys(), default=0) + 1
    fold = _FoldState(n)
    for src, edges in m.out.items():
        for label, dsts in edges.items():
            for dst in dsts:
                fold.children.setdefault(src, {})[label] = dst
    budget.alloc(n * (_NODE_COST // 2))

    red: set[int] = {_find(fold.rep, m.initial)}
    while True:
        budget.check_now()
        red = {_find(fold.rep, r) for r in red}
        blue = sorted({child for r in red for child in fold.child_classes(r).values()}
                      - red)
        if not blue:
            break
        b = blue[0]
        best_score, best_trial = 0, None
        for r in sorted(red):
            trial = fold.copy(budget)
            score = trial.fold(r, b, budget)
            if score > best_score:
                if best_trial is not None:
                    best_trial.release(budget)
                best_score, best_trial = score, trial
            else:
                trial.release(budget)
        if best_trial is not None and best_score >= 1:
            fold.release(budget)
            fold = best_trial
        else:
            red.add(b)

    result = _Machine()
    roots = sorted({_find(fold.rep, v) for v in range(n)})
    result.out = {root: {} for root in roots}
    for root in roots:
        for label, child in fold.child_classes(root).items():
            result.out[root].setdefault(label, set()).add(child)
    result.initial = _find(fold.rep, m.initial)
    return result.to_fsm(budget)


def accepts(fsm: FSM, labels: Sequence[str]) -> bool:
    """Prefix-closed acceptance via subset simulation (handles NFAs)."""
    if not fsm.states:
        return len(labels) == 0
    step: dict[tuple[str, str], set[str]] = {}
    for (src, dst, label) in fsm.transitions:
        step.setdefault((src, label), set()).add(dst)
    current = {fsm.initial}
    for label in labels:
        nxt: set[str] = set()
        for s in current:
            nxt |= step.get((s, label), set())
        if not nxt:
            return False
        current = nxt
    return True


def enriched_labels(ftrace: FilteredTrace, eps: float = 0.0,
                    fields: Optional[Iterable[str]] = None,
                    budget: Budget = _NO_BUDGET) -> list[str]:
    """gkTail-lite alphabet: function name tagged with its changed-field set,
    computed between consecutive step snapshots."""
    fields = tuple(fields) if fields is not None else tuple(ftrace.origin.monitored_fields)
    prev = ftrace.initial_vars()
    labels = []
    for step in ftrace.steps:
        budget.tick()
        changed = sorted(f for f in fields
                         if not values_equal(prev.get(f, 0), step.vars.get(f, 0), eps))
        labels.append(f"{step.fn}[{','.join(changed)}]")
        prev = step.vars
    return labels


def gktail_lite(ftraces: Sequence[FilteredTrace], k: int, careful_det: bool = False,
                eps: float = 0.0, budget: Budget = _NO_BUDGET) -> FSM:
    """kTails over the (function, changed-field signature) alphabet."""
    seqs = [enriched_labels(ft, eps, budget=budget) for ft in ftraces]
    pta = build_pta(seqs, budget)
    return ktails(pta, k, careful_det, budget)


@dataclass(frozen=True)
class SweepRow:
    strategy: str
    k: int
    careful_det: bool
    outcome: str  # ok | timeout | oom
    states: Optional[int]
    transitions: Optional[int]
    wall_ms: float


def mine(ftraces: Sequence[FilteredTrace], params: MinerParams) -> FSM:
    """Run one configured miner over filtered traces."""
    budget = params.budget()
    if params.strategy == "gktail_lite":
        return gktail_lite(ftraces, params.k, params.careful_det, budget=budget)
    seqs = [ft.labels() for ft in ftraces]
    pta = build_pta(seqs, budget)
    if params.strategy == "ktails":
        return ktails(pta, params.k, params.careful_det, budget)
    return redblue(pta, params, budget)


def sweep(ftraces: Sequence[FilteredTrace], strategies: Sequence[str],
          ks: Sequence[int], careful_dets: Sequence[bool],
          timeout: Optional[float] = None,
          memory_budget: Optional[int] = None) -> list[SweepRow]:
    """Run the full configuration grid, recording one outcome row per run."""
    rows = []
    for strategy in strategies:
        for k in ks:
            for det in careful_dets:
                params = MinerParams(strategy=strategy, k=k, careful_det=det,
                                     timeout=timeout, memory_budget=memory_budget)
                start = time.monotonic()
                try:
                    fsm = mine(ftraces, params)
                    outcome, states, transitions = "ok", len(fsm.states), len(fsm.transitions)
                except MineTimeout:
                    outcome, states, transitions = "timeout", None, None
                except MineOutOfMemory:
                    outcome, states, transitions = "oom", None, None
                wall_ms = (time.monotonic() - start) * 1000.0
                rows.append(SweepRow(strategy, k, det, outcome, states, transitions, wall_ms))
    return rows
