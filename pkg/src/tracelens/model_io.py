"""Canonical model/config serialization and DOT export.

Model file layout (`.model.json`): top-level keys `meta`, `states`,
`transitions`, `warnings`, in that order. States are sorted by id,
transitions by (from, label, to); valuation components serialize as strings
(raw numbers for value-change components, token names otherwise), so
serialization is byte-deterministic and round trips are isomorphic.
"""
from __future__ import annotations

import json
from typing import Iterable, Union

from .core import (CMP_TOKENS, RANGE_TOKENS, EFSM, FSM, ModelMeta, State, Valuation,
                   Warning_, format_scalar, parse_scalar, state_id_sort_key)
from .errors import ConfigParseError, ModelParseError
from . import constraints as _constraints
from .core import MonitorConfig

Model = Union[EFSM, FSM]

_TOKENS = set(CMP_TOKENS) | set(RANGE_TOKENS)


def encode_component(component) -> str:
    if isinstance(component, str):
        return component
    return format_scalar(component)


def decode_component(text: str):
    if text in _TOKENS:
        return text
    return parse_scalar(text)


def encode_valuation(valuation: Valuation) -> dict[str, str]:
    return {str(i): encode_component(c) for i, c in enumerate(valuation)}


def decode_valuation(obj: dict) -> Valuation:
    items = sorted(obj.items(), key=lambda kv: int(kv[0]))
    return tuple(decode_component(v) for _k, v in items)


def _meta_obj(meta: ModelMeta) -> dict:
    return {
        "kind": meta.kind,
        "config": meta.config_name,
        "constraints": list(meta.constraints),
        "filters": list(meta.filters),
        "eq_epsilon": meta.eq_epsilon,
        "params": {k: v for k, v in meta.params},
    }


def serialize_model(model: Model) -> str:
    if isinstance(model, FSM):
        return _serialize_fsm(model)
    states = sorted(model.states, key=lambda s: state_id_sort_key(s.id))
    obj = {
        "meta": _meta_obj(model.meta),
        "states": [
            {
                "id": s.id,
                "valuation": encode_valuation(s.valuation),
                "label": s.label,
                "initial": s.initial,
                "segments": [[tid, a, b] for (tid, a, b) in s.segments],
            }
            for s in states
        ],
        "transitions": [
            {"from": src, "to": dst, "label": label}
            for (src, dst, label) in sorted(
                model.transitions,
                key=lambda t: (state_id_sort_key(t[0]), t[2], state_id_sort_key(t[1])))
        ],
        "warnings": [
            {"trace": w.trace_id, "seq": w.seq, "field": w.field, "fn": w.fn}
            for w in model.warnings
        ],
    }
    return json.dumps(obj, indent=2) + "\n"


def _serialize_fsm(fsm: FSM, meta: ModelMeta | None = None) -> str:
    meta = meta or ModelMeta(kind="fsm")
    obj = {
        "meta": _meta_obj(meta),
        "states": [
            {"id": sid, "valuation": {}, "label": "", "initial": sid == fsm.initial,
             "segments": []}
            for sid in sorted(fsm.states, key=state_id_sort_key)
        ],
        "transitions": [
            {"from": src, "to": dst, "label": label}
            for (src, dst, label) in sorted(
                fsm.transitions,
                key=lambda t: (state_id_sort_key(t[0]), t[2], state_id_sort_key(t[1])))
        ],
        "warnings": [],
    }
    return json.dumps(obj, indent=2) + "\n"


def serialize_fsm_with_params(fsm: FSM, params: dict[str, str]) -> str:
    meta = ModelMeta(kind="fsm", params=tuple(sorted(params.items())))
    return _serialize_fsm(fsm, meta)


def parse_model(text: str) -> Model:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelParseError(f"invalid JSON: {exc.msg}",
                              f"line {exc.lineno} col {exc.colno}") from None
    if not isinstance(obj, dict):
        raise ModelParseError("model document must be an object", "$")
    for key in ("meta", "states", "transitions", "warnings"):
        if key not in obj:
            raise ModelParseError(f"missing key {key!r}", "$")
    meta_obj = obj["meta"]
    if not isinstance(meta_obj, dict) or "kind" not in meta_obj:
        raise ModelParseError("meta must carry a kind", "$.meta")
    kind = meta_obj["kind"]
    if kind not in ("efsm", "fsm"):
        raise ModelParseError(f"unknown model kind {kind!r}", "$.meta.kind")

    def fail(path: str, msg: str):
        raise ModelParseError(msg, path)

    states_obj = obj["states"]
    trans_obj = obj["transitions"]
    if not isinstance(states_obj, list) or not isinstance(trans_obj, list):
        fail("$", "states/transitions must be arrays")
    transitions = set()
    for i, t in enumerate(trans_obj):
        try:
            transitions.add((t["from"], t["to"], t["label"]))
        except (KeyError, TypeError):
            fail(f"$.transitions[{i}]", "transition needs from/to/label")

    meta = ModelMeta(
        kind=kind,
        config_name=meta_obj.get("config", ""),
        constraints=tuple(meta_obj.get("constraints", ())),
        filters=tuple(meta_obj.get("filters", ())),
        eq_epsilon=meta_obj.get("eq_epsilon", 0.0),
        params=tuple(sorted((meta_obj.get("params") or {}).items())),
    )

    if kind == "fsm":
        ids = []
        initial = None
        for i, s in enumerate(states_obj):
            try:
                ids.append(s["id"])
                if s["initial"]:
                    initial = s["id"]
            except (KeyError, TypeError):
                fail(f"$.states[{i}]", "state needs id/initial")
        if ids and initial is None:
            fail("$.states", "fsm has no initial state")
        try:
            return FSM(states=tuple(ids), initial=initial if ids else "",
                       transitions=frozenset(transitions))
        except ValueError as exc:
            fail("$", str(exc))

    states = []
    for i, s in enumerate(states_obj):
        try:
            states.append(State(
                id=s["id"],
                valuation=decode_valuation(s["valuation"]),
                label=s["label"],
                initial=bool(s["initial"]),
                segments=tuple((seg[0], seg[1], seg[2]) for seg in s["segments"]),
            ))
        except (KeyError, TypeError, IndexError, ValueError):
            fail(f"$.states[{i}]", "malformed state object")
    warnings = []
    for i, w in enumerate(obj["warnings"]):
        try:
            warnings.append(Warning_(w["trace"], w["seq"], w["field"], w["fn"]))
        except (KeyError, TypeError):
            fail(f"$.warnings[{i}]", "malformed warning object")
    try:
        return EFSM(states=tuple(states), transitions=frozenset(transitions),
                    meta=meta, warnings=tuple(warnings))
    except ValueError as exc:
        raise ModelParseError(str(exc), "$") from None


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(model: Model, show_valuations: bool = False,
               highlight: Iterable[str] = ()) -> str:
    """Render the model as a DOT digraph; layout is the renderer's problem."""
    highlight = set(highlight)
    lines = ["digraph model {", "  rankdir=LR;"]
    if isinstance(model, FSM):
        states = [(sid, "", sid == model.initial) for sid in
                  sorted(model.states, key=state_id_sort_key)]
    else:
        states = [(s.id, s.label, s.initial) for s in
                  sorted(model.states, key=lambda s: state_id_sort_key(s.id))]
    for sid, label, initial in states:
        text = sid
        if show_valuations and label:
            text = f"{sid}\\n{_dot_escape(label)}"
        attrs = [f'label="{text}"']
        attrs.append("shape=doubleoctagon" if initial else "shape=ellipse")
        if sid in highlight:
            attrs.append('style=filled fillcolor="gold"')
        lines.append(f'  "{_dot_escape(sid)}" [{", ".join(attrs)}];')
    transitions = sorted(model.transitions,
                         key=lambda t: (state_id_sort_key(t[0]), t[2],
                                        state_id_sort_key(t[1])))
    for (src, dst, label) in transitions:
        lines.append(f'  "{_dot_escape(src)}" -> "{_dot_escape(dst)}" '
                     f'[label="{_dot_escape(label)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- monitor config files (.cfg.json) -----------------------------------------


def serialize_config(config: MonitorConfig) -> str:
    obj = {
        "name": config.name,
        "fields": list(config.fields),
        "functions": list(config.functions),
        "constraints": config.constraint_texts(),
        "filters": config.filter_texts(),
        "eq_epsilon": config.eq_epsilon,
    }
    return json.dumps(obj, indent=2) + "\n"


def parse_config(text: str) -> MonitorConfig:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"invalid config JSON: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise ConfigParseError("config must be an object")
    try:
        return MonitorConfig(
            name=obj.get("name", ""),
            fields=tuple(obj["fields"]),
            functions=tuple(obj["functions"]),
            constraints=tuple(_constraints.parse_constraint(c) for c in obj["constraints"]),
            filters=tuple(_constraints.parse_filter(f) for f in obj.get("filters", ())),
            eq_epsilon=float(obj.get("eq_epsilon", 0.0)),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigParseError(f"bad config structure: {exc}") from None
    except ValueError as exc:
        raise ConfigParseError(str(exc)) from None
