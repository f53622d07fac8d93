"""Constraint templates: snapshot -> valuation, plus range-filter admission.

Templates are an open enumeration behind `evaluate`; adding one means adding
a component function here without touching the abstractor.
"""
from __future__ import annotations

import re
from typing import Mapping

from .core import (ABOVE, AT_HI, AT_LO, BELOW, COMPARED_WITH, COMPARED_WITH_RANGE, EQ, GT, LT,
                   VALUE_CHANGE, WITHIN, ConstraintSpec, MonitorConfig, Operand, RangeFilter,
                   Scalar, Valuation, coerce_scalar, parse_scalar, values_equal)
from .errors import ConfigParseError, EvalMissingField


def _resolve(snapshot: Mapping[str, Scalar], path: str) -> Scalar:
    try:
        return snapshot[path]
    except KeyError:
        raise EvalMissingField(f"snapshot is missing field '{path}'") from None


def _component(spec: ConstraintSpec, snapshot: Mapping[str, Scalar], eps: float):
    x = _resolve(snapshot, spec.x)
    if spec.template == VALUE_CHANGE:
        return coerce_scalar(x)
    if spec.template == COMPARED_WITH:
        y = spec.y.const if spec.y.is_const else _resolve(snapshot, spec.y.path)
        if values_equal(x, y, eps):
            return EQ
        return LT if x < y else GT
    # range: equality at the endpoints wins over strict ordering
    y = spec.y.const if spec.y.is_const else _resolve(snapshot, spec.y.path)
    z = spec.z.const if spec.z.is_const else _resolve(snapshot, spec.z.path)
    if values_equal(x, y, eps):
        return AT_LO
    if values_equal(x, z, eps):
        return AT_HI
    if x < y:
        return BELOW
    if x > z:
        return ABOVE
    return WITHIN


def evaluate(snapshot: Mapping[str, Scalar], config: MonitorConfig) -> Valuation:
    """One component per constraint, in the config's constraint order."""
    return tuple(_component(spec, snapshot, config.eq_epsilon) for spec in config.constraints)


def admits(snapshot: Mapping[str, Scalar], filters, eps: float = 0.0) -> bool:
    """True iff every filter's field lies in [lo, hi] (inclusive, eps at ends)."""
    for flt in filters:
        v = _resolve(snapshot, flt.x)
        if v < flt.lo and not values_equal(v, flt.lo, eps):
            return False
        if v > flt.hi and not values_equal(v, flt.hi, eps):
            return False
    return True


def component_label(spec: ConstraintSpec, component) -> str:
    """Human-readable invariant for one valuation component."""
    if spec.template == VALUE_CHANGE:
        from .core import format_scalar
        return f"{spec.x} == {format_scalar(component)}"
    if spec.template == COMPARED_WITH:
        op = {LT: "<", EQ: "==", GT: ">"}[component]
        return f"{spec.x} {op} {spec.y.text()}"
    y, z = spec.y.text(), spec.z.text()
    return {
        BELOW: f"{spec.x} < {y}",
        AT_LO: f"{spec.x} == {y}",
        WITHIN: f"{y} < {spec.x} < {z}",
        AT_HI: f"{spec.x} == {z}",
        ABOVE: f"{spec.x} > {z}",
    }[component]


def valuation_label(valuation: Valuation, config: MonitorConfig) -> str:
    return " & ".join(
        component_label(spec, comp) for spec, comp in zip(config.constraints, valuation))


# --- text forms --------------------------------------------------------------
#
# value_change(x) | cmp(x, y|<const>) | range(x, y|<const>, z|<const>)
# filter(x, lo, hi)

_CALL_RE = re.compile(r"^\s*(\w+)\s*\(([^)]*)\)\s*$")
_NUMBER_RE = re.compile(r"^[+-]?(\d+\.?\d*([eE][+-]?\d+)?|\.\d+([eE][+-]?\d+)?)$")
_PATH_RE = re.compile(r"^[A-Za-z_]\w*(\.[A-Za-z_]\w*|\[\d+\])*$")


def _parse_operand(token: str) -> Operand:
    token = token.strip()
    if _NUMBER_RE.match(token):
        return Operand(const=parse_scalar(token))
    if _PATH_RE.match(token):
        return Operand(path=token)
    raise ConfigParseError(f"bad operand: {token!r}")


def _parse_path(token: str) -> str:
    token = token.strip()
    if not _PATH_RE.match(token):
        raise ConfigParseError(f"bad field path: {token!r}")
    return token


def parse_constraint(text: str) -> ConstraintSpec:
    m = _CALL_RE.match(text)
    if not m:
        raise ConfigParseError(f"bad constraint syntax: {text!r}")
    name, argstr = m.group(1), m.group(2)
    args = [a for a in (p.strip() for p in argstr.split(",")) if a] if argstr.strip() else []
    if name == "value_change":
        if len(args) != 1:
            raise ConfigParseError(f"value_change takes 1 argument: {text!r}")
        return ConstraintSpec(VALUE_CHANGE, _parse_path(args[0]))
    if name == "cmp":
        if len(args) != 2:
            raise ConfigParseError(f"cmp takes 2 arguments: {text!r}")
        return ConstraintSpec(COMPARED_WITH, _parse_path(args[0]), _parse_operand(args[1]))
    if name == "range":
        if len(args) != 3:
            raise ConfigParseError(f"range takes 3 arguments: {text!r}")
        spec = ConstraintSpec(COMPARED_WITH_RANGE, _parse_path(args[0]),
                              _parse_operand(args[1]), _parse_operand(args[2]))
        if spec.y.is_const and spec.z.is_const and not spec.y.const < spec.z.const:
            raise ConfigParseError(f"range bounds must satisfy y < z: {text!r}")
        return spec
    raise ConfigParseError(f"unknown constraint template: {name!r}")


def parse_filter(text: str) -> RangeFilter:
    m = _CALL_RE.match(text)
    if not m or m.group(1) != "filter":
        raise ConfigParseError(f"bad filter syntax: {text!r}")
    args = [a.strip() for a in m.group(2).split(",")]
    if len(args) != 3:
        raise ConfigParseError(f"filter takes 3 arguments: {text!r}")
    path = _parse_path(args[0])
    try:
        lo, hi = parse_scalar(args[1]), parse_scalar(args[2])
    except ValueError:
        raise ConfigParseError(f"filter bounds must be numeric: {text!r}") from None
    if lo > hi:
        raise ConfigParseError(f"filter bounds inverted: {text!r}")
    return RangeFilter(path, lo, hi)
