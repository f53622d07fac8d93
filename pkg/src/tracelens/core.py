"""Shared domain types: symbols, monitor configs, traces, valuations, machines.

All types are treated as immutable after construction (the mutable
containers they hold are never modified by library code), so values can be
shared freely across threads.

Scalars are 64-bit ints or 64-bit floats; booleans are stored as 0/1 ints.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .errors import DiffKeyMismatch

Scalar = Union[int, float]

FIELD_KINDS = ("int", "float", "bool", "enum")

# comparison outcome tokens (two-operand template)
LT, EQ, GT = "LT", "EQ", "GT"
# range outcome tokens (three-operand template)
BELOW, AT_LO, WITHIN, AT_HI, ABOVE = "BELOW", "AT_LO", "WITHIN", "AT_HI", "ABOVE"

CMP_TOKENS = (LT, EQ, GT)
RANGE_TOKENS = (BELOW, AT_LO, WITHIN, AT_HI, ABOVE)

# A valuation is one component per configured constraint, in config order:
# the raw observed scalar for a value-change constraint, a token otherwise.
Valuation = tuple


def coerce_scalar(value) -> Scalar:
    """Normalize a raw value to the supported scalar kinds."""
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, (int, float)):
        return value
    raise TypeError(f"unsupported scalar value: {value!r}")


def values_equal(a: Scalar, b: Scalar, eps: float) -> bool:
    """Scalar equality: exact for int/bool/enum pairs, |a-b| <= eps otherwise."""
    if isinstance(a, int) and isinstance(b, int):
        return a == b
    return abs(a - b) <= eps


@dataclass(frozen=True)
class FieldDecl:
    path: str  # dot-separated leaf path, e.g. "plane.alt"
    kind: str  # one of FIELD_KINDS
    unit: Optional[str] = None


@dataclass(frozen=True)
class FunctionDecl:
    name: str
    file: str
    line: int


@dataclass(frozen=True)
class SymbolTable:
    """Global fields and functions available for monitoring."""

    fields: tuple[FieldDecl, ...]
    functions: tuple[FunctionDecl, ...]

    def __post_init__(self):
        seen = set()
        for f in self.fields:
            if f.path in seen:
                raise ValueError(f"duplicate field path: {f.path}")
            seen.add(f.path)
            if f.kind not in FIELD_KINDS:
                raise ValueError(f"bad field kind for {f.path}: {f.kind}")
        seen_fn = set()
        for fn in self.functions:
            key = (fn.name, fn.file)
            if key in seen_fn:
                raise ValueError(f"duplicate function: {fn.name} in {fn.file}")
            seen_fn.add(key)

    def field_paths(self) -> set[str]:
        return {f.path for f in self.fields}

    def function_names(self) -> set[str]:
        return {f.name for f in self.functions}


@dataclass(frozen=True)
class Operand:
    """Constraint operand: a field path or a numeric constant."""

    path: Optional[str] = None
    const: Optional[Scalar] = None

    def __post_init__(self):
        if (self.path is None) == (self.const is None):
            raise ValueError("operand must be exactly one of field path / constant")

    @property
    def is_const(self) -> bool:
        return self.const is not None

    def resolve(self, snapshot: Mapping[str, Scalar]) -> Scalar:
        if self.is_const:
            return self.const
        return snapshot[self.path]

    def text(self) -> str:
        if self.is_const:
            return format_scalar(self.const)
        return self.path


VALUE_CHANGE = "value_change"
COMPARED_WITH = "cmp"
COMPARED_WITH_RANGE = "range"

TEMPLATES = (VALUE_CHANGE, COMPARED_WITH, COMPARED_WITH_RANGE)


@dataclass(frozen=True)
class ConstraintSpec:
    """One abstraction constraint: a template applied to a monitored field.

    value_change(x)   -> component is the observed value of x
    cmp(x, y)         -> component in {LT, EQ, GT}
    range(x, y, z)    -> component in {BELOW, AT_LO, WITHIN, AT_HI, ABOVE}
    """

    template: str
    x: str
    y: Optional[Operand] = None
    z: Optional[Operand] = None

    def __post_init__(self):
        if self.template not in TEMPLATES:
            raise ValueError(f"unknown constraint template: {self.template}")
        if self.template == VALUE_CHANGE and (self.y is not None or self.z is not None):
            raise ValueError("value_change takes only x")
        if self.template == COMPARED_WITH and (self.y is None or self.z is not None):
            raise ValueError("cmp takes exactly x, y")
        if self.template == COMPARED_WITH_RANGE and (self.y is None or self.z is None):
            raise ValueError("range takes exactly x, y, z")

    def referenced_fields(self) -> list[str]:
        refs = [self.x]
        for op in (self.y, self.z):
            if op is not None and not op.is_const:
                refs.append(op.path)
        return refs

    def text(self) -> str:
        if self.template == VALUE_CHANGE:
            return f"value_change({self.x})"
        if self.template == COMPARED_WITH:
            return f"cmp({self.x}, {self.y.text()})"
        return f"range({self.x}, {self.y.text()}, {self.z.text()})"


@dataclass(frozen=True)
class RangeFilter:
    """Admissibility window: snapshots with x outside [lo, hi] are ignored."""

    x: str
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"filter bounds inverted: {self.lo} > {self.hi}")

    def text(self) -> str:
        return f"filter({self.x}, {format_scalar(self.lo)}, {format_scalar(self.hi)})"


@dataclass(frozen=True)
class MonitorConfig:
    """The user's selection: what to monitor and how to abstract it."""

    name: str
    fields: tuple[str, ...]
    functions: tuple[str, ...]
    constraints: tuple[ConstraintSpec, ...]
    filters: tuple[RangeFilter, ...] = ()
    eq_epsilon: float = 0.0

    def __post_init__(self):
        if self.eq_epsilon < 0:
            raise ValueError("eq_epsilon must be non-negative")

    def constraint_texts(self) -> list[str]:
        return [c.text() for c in self.constraints]

    def filter_texts(self) -> list[str]:
        return [f.text() for f in self.filters]


@dataclass(frozen=True)
class ValidationFinding:
    code: str
    message: str
    subject: str = ""


def validate_config(config: MonitorConfig, symbols: SymbolTable) -> list[ValidationFinding]:
    """Check a config against a symbol table; findings are data, not failures.

    Empty result means every referenced field/function exists and all
    structural invariants hold.
    """
    findings: list[ValidationFinding] = []
    known_fields = symbols.field_paths()
    known_functions = symbols.function_names()

    for path in config.fields:
        if path not in known_fields:
            findings.append(ValidationFinding("UNKNOWN_FIELD", f"field not in symbols: {path}", path))
    for fn in config.functions:
        if fn not in known_functions:
            findings.append(ValidationFinding("UNKNOWN_FUNCTION", f"function not in symbols: {fn}", fn))

    selected = set(config.fields)
    if not config.constraints:
        findings.append(ValidationFinding("NO_CONSTRAINTS", "config has no constraints", config.name))
    for spec in config.constraints:
        for path in spec.referenced_fields():
            if path not in known_fields:
                findings.append(
                    ValidationFinding("UNKNOWN_FIELD", f"field not in symbols: {path}", path))
            if path not in selected:
                findings.append(
                    ValidationFinding("FIELD_NOT_SELECTED",
                                      f"constraint references unselected field: {path}", path))
        if (spec.template == COMPARED_WITH_RANGE and spec.y.is_const and spec.z.is_const
                and not spec.y.const < spec.z.const):
            findings.append(
                ValidationFinding("RANGE_EMPTY",
                                  f"range bounds must satisfy y < z: {spec.text()}", spec.x))
    for flt in config.filters:
        if flt.x not in known_fields:
            findings.append(ValidationFinding("UNKNOWN_FIELD", f"field not in symbols: {flt.x}", flt.x))
        if flt.x not in selected:
            findings.append(
                ValidationFinding("FIELD_NOT_SELECTED",
                                  f"filter references unselected field: {flt.x}", flt.x))
    return findings


def snapshot_diff(before: Mapping[str, Scalar], after: Mapping[str, Scalar],
                  eps: float = 0.0) -> set[str]:
    """Field paths whose values differ between two snapshots of the same keys."""
    if set(before.keys()) != set(after.keys()):
        raise DiffKeyMismatch(
            f"snapshot key sets differ: {sorted(set(before) ^ set(after))}")
    return {k for k, v in before.items() if not values_equal(v, after[k], eps)}


@dataclass
class TraceEvent:
    """One enter/exit boundary with the monitored-field snapshot taken there."""

    seq: int
    kind: str  # "enter" | "exit"
    fn: str
    depth: int
    vars: dict[str, Scalar]
    args: Optional[dict[str, Scalar]] = None  # enter events only

    def __post_init__(self):
        if self.kind not in ("enter", "exit"):
            raise ValueError(f"bad event kind: {self.kind}")
        if self.kind == "enter" and self.args is None:
            object.__setattr__(self, "args", {})


@dataclass
class ConcreteTrace:
    id: str
    events: list[TraceEvent]
    monitored_fields: tuple[str, ...]


@dataclass(frozen=True)
class State:
    """Abstract state: identified by its valuation within one model."""

    id: str
    valuation: Valuation
    label: str
    initial: bool
    # concrete coverage: (trace id, start seq, end seq), inclusive bounds
    segments: tuple[tuple[str, int, int], ...] = ()


@dataclass(frozen=True)
class ModelMeta:
    """Provenance a model needs for compatibility checks and display."""

    kind: str  # "efsm" | "fsm"
    config_name: str = ""
    constraints: tuple[str, ...] = ()
    filters: tuple[str, ...] = ()
    eq_epsilon: float = 0.0
    params: tuple[tuple[str, str], ...] = ()  # creation parameters, sorted


@dataclass(frozen=True)
class Warning_:
    """An unexplained change: a monitored field changed outside selected calls."""

    trace_id: str
    seq: int
    field: str
    fn: str

    def text(self) -> str:
        return (f"field '{self.field}' changed at seq {self.seq} of trace "
                f"'{self.trace_id}' by unselected function '{self.fn}'")


@dataclass(frozen=True)
class EFSM:
    """Valuation-keyed state machine with composite (zoomable) states."""

    states: tuple[State, ...]
    transitions: frozenset[tuple[str, str, str]]  # (from id, to id, fn label)
    meta: ModelMeta
    warnings: tuple[Warning_, ...] = ()

    def __post_init__(self):
        vals = [s.valuation for s in self.states]
        if len(set(vals)) != len(vals):
            raise ValueError("duplicate valuation among states")
        ids = {s.id for s in self.states}
        for (src, dst, _label) in self.transitions:
            if src not in ids or dst not in ids:
                raise ValueError(f"transition endpoint not a state: {src}->{dst}")

    def state_by_id(self, sid: str) -> State:
        for s in self.states:
            if s.id == sid:
                return s
        raise KeyError(sid)

    def state_by_valuation(self, valuation: Valuation) -> Optional[State]:
        for s in self.states:
            if s.valuation == valuation:
                return s
        return None

    def initial_states(self) -> list[State]:
        return [s for s in self.states if s.initial]


@dataclass(frozen=True)
class FSM:
    """Plain labeled transition system; prefix-closed acceptance by default."""

    states: tuple[str, ...]
    initial: str
    transitions: frozenset[tuple[str, str, str]]
    accepting: Optional[frozenset[str]] = None  # None: every state accepts

    def __post_init__(self):
        ids = set(self.states)
        if self.states and self.initial not in ids:
            raise ValueError(f"initial state undeclared: {self.initial}")
        for (src, dst, _label) in self.transitions:
            if src not in ids or dst not in ids:
                raise ValueError(f"transition endpoint not a state: {src}->{dst}")

    def alphabet(self) -> set[str]:
        return {label for (_s, _d, label) in self.transitions}


def format_scalar(value: Scalar) -> str:
    """Canonical text for a scalar: ints bare, floats via repr."""
    if isinstance(value, int):
        return str(value)
    return repr(value)


def parse_scalar(text: str) -> Scalar:
    """Inverse of format_scalar."""
    try:
        return int(text)
    except ValueError:
        return float(text)


def sequence_of(events: Iterable[TraceEvent]) -> list[TraceEvent]:
    return list(events)


def state_id_sort_key(sid: str):
    """Order "s0", "s1", ... numerically, unknown shapes after, lexicographic."""
    if sid.startswith("s") and sid[1:].isdigit():
        return (0, int(sid[1:]), sid)
    return (1, 0, sid)
