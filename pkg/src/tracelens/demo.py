"""Deterministic autopilot scenario generator.

Re-creates the takeoff example the constraint templates are usually shown
on: a tick loop calling accelerate/takeoff (and retractGear in the gear
scenarios) over six global fields. Not a flight-dynamics model; every
quantity is a monotone counter so scenario traces are bit-reproducible.

Tick structure (call nesting is part of the fixture value):

    enter tick
      enter accelerate / exit        speed += accel_step (capped in full_flight)
      enter takeoff    / exit        spool-up bump, or climb once fast enough
      [enter retractGear / exit]     gear 0 -> 1 above the safe altitude
    exit tick

`takeoff` performs a small spool-up adjustment to speed once speed reaches
half the takeoff speed; below that threshold its calls have no effect at
all. That gives downstream views all three behaviors: calls that change
nothing, calls that change state without changing the abstract valuation,
and the one call that crosses it.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .core import ConcreteTrace, FieldDecl, FunctionDecl, SymbolTable, TraceEvent

SCENARIOS = ("takeoff", "takeoff_with_gear", "full_flight", "buggy_takeoff")

DEMO_SOURCE = "listing1.c"

FIELD_ORDER = ("gear", "speed", "takeOffSpeed", "altitude", "groundAlt",
               "safeAltForGearRetract")


@dataclass(frozen=True)
class FlightScenario:
    name: str
    takeOffSpeed: float = 60.0
    groundAlt: float = 0.0
    safeAltForGearRetract: float = 100.0
    accel_step: float = 10.0
    climb_step: float = 25.0
    spool_step: float = 1.0
    ticks: int = 40
    seed: int = 0  # reserved; scenarios are deterministic

    def __post_init__(self):
        if self.name not in SCENARIOS:
            raise ValueError(f"unknown scenario: {self.name}")
        for attr in ("takeOffSpeed", "safeAltForGearRetract", "accel_step",
                     "climb_step", "spool_step"):
            if getattr(self, attr) <= 0:
                raise ValueError(f"{attr} must be positive")
        if self.ticks < 1:
            raise ValueError("ticks must be >= 1")


def demo_symbol_table() -> SymbolTable:
    fields = (
        FieldDecl("gear", "int"),
        FieldDecl("speed", "float"),
        FieldDecl("takeOffSpeed", "float"),
        FieldDecl("altitude", "float"),
        FieldDecl("groundAlt", "float"),
        FieldDecl("safeAltForGearRetract", "float"),
    )
    functions = (
        FunctionDecl("tick", DEMO_SOURCE, 10),
        FunctionDecl("accelerate", DEMO_SOURCE, 18),
        FunctionDecl("takeoff", DEMO_SOURCE, 24),
        FunctionDecl("retractGear", DEMO_SOURCE, 36),
    )
    return SymbolTable(fields=fields, functions=functions)


class _Sim:
    def __init__(self, s: FlightScenario, trace_id: str):
        self.s = s
        self.gear = 0
        self.speed = 0.0
        self.altitude = -1.0
        self.events: list[TraceEvent] = []
        self.seq = 0
        self.trace_id = trace_id

    def snapshot(self) -> dict:
        return {
            "gear": self.gear,
            "speed": self.speed,
            "takeOffSpeed": self.s.takeOffSpeed,
            "altitude": self.altitude,
            "groundAlt": self.s.groundAlt,
            "safeAltForGearRetract": self.s.safeAltForGearRetract,
        }

    def emit(self, kind: str, fn: str, depth: int, args: dict | None = None):
        self.events.append(TraceEvent(seq=self.seq, kind=kind, fn=fn, depth=depth,
                                      vars=self.snapshot(),
                                      args=(args or {}) if kind == "enter" else None))
        self.seq += 1

    def call(self, fn: str, depth: int, body, args: dict | None = None):
        self.emit("enter", fn, depth, args)
        body()
        self.emit("exit", fn, depth)

    def accelerate(self):
        s = self.s
        if self.s.name == "full_flight":
            cruise = 2.0 * s.takeOffSpeed
            if self.speed < cruise:
                self.speed = min(self.speed + s.accel_step, cruise)
        else:
            self.speed += s.accel_step

    def takeoff(self):
        s = self.s
        if self.speed >= s.takeOffSpeed:
            if s.name == "full_flight" and self.altitude >= 2.0 * s.safeAltForGearRetract:
                return  # level off at the ceiling
            if self.altitude < s.groundAlt:
                self.altitude = s.groundAlt + s.climb_step  # liftoff jump, never zero
            else:
                self.altitude += s.climb_step
        elif self.speed >= s.takeOffSpeed / 2.0:
            self.speed += s.spool_step  # runway spool-up, no effect on the flight state

    def retract_gear(self):
        s = self.s
        threshold = s.groundAlt if s.name == "buggy_takeoff" else s.safeAltForGearRetract
        if self.gear == 0 and self.altitude > threshold:
            self.gear = 1

    def run(self) -> ConcreteTrace:
        s = self.s
        with_gear = s.name in ("takeoff_with_gear", "full_flight", "buggy_takeoff")
        for n in range(1, s.ticks + 1):
            def tick_body():
                self.call("accelerate", 1, self.accelerate)
                self.call("takeoff", 1, self.takeoff)
                if with_gear:
                    self.call("retractGear", 1, self.retract_gear)

            self.call("tick", 0, tick_body, args={"n": n})
            if s.name == "takeoff" and self.altitude > s.groundAlt:
                break
            if s.name in ("takeoff_with_gear", "buggy_takeoff") and self.gear == 1:
                break
        return ConcreteTrace(id=self.trace_id, events=self.events,
                             monitored_fields=FIELD_ORDER)


def run_scenario(scenario: FlightScenario, trace_id: str | None = None) -> ConcreteTrace:
    return _Sim(scenario, trace_id or scenario.name).run()


def scenario_from_params(name: str, params: dict | None = None) -> FlightScenario:
    base = FlightScenario(name=name)
    if not params:
        return base
    fields = {"takeOffSpeed", "groundAlt", "safeAltForGearRetract", "accel_step",
              "climb_step", "spool_step", "ticks", "seed"}
    unknown = set(params) - fields
    if unknown:
        raise ValueError(f"unknown scenario params: {sorted(unknown)}")
    coerced = {}
    for key, value in params.items():
        coerced[key] = int(value) if key in ("ticks", "seed") else float(value)
    return replace(base, **coerced)
