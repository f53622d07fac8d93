from __future__ import annotations

import pytest

from tracelens import constraints, demo, traces
from tracelens.core import MonitorConfig

ACCEPTANCE_RESULTS: list[tuple[str, bool]] = []


def record_criterion(name: str, ok: bool):
    ACCEPTANCE_RESULTS.append((name, ok))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("=== acceptance criteria ===")
    for name, ok in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")


@pytest.fixture(scope="session")
def fig1_config() -> MonitorConfig:
    return MonitorConfig(
        name="fig1",
        fields=("altitude", "speed"),
        functions=("accelerate", "takeoff"),
        constraints=(constraints.parse_constraint("cmp(altitude, 0)"),),
    )


@pytest.fixture(scope="session")
def table1_config() -> MonitorConfig:
    cons = tuple(constraints.parse_constraint(t) for t in (
        "value_change(gear)",
        "cmp(speed, takeOffSpeed)",
        "range(altitude, groundAlt, safeAltForGearRetract)",
    ))
    return MonitorConfig(
        name="table1",
        fields=demo.FIELD_ORDER,
        functions=("accelerate", "takeoff", "retractGear"),
        constraints=cons,
    )


@pytest.fixture(scope="session")
def takeoff_trace():
    return demo.run_scenario(demo.FlightScenario(name="takeoff"), trace_id="takeoff")


@pytest.fixture(scope="session")
def gear_trace():
    return demo.run_scenario(demo.FlightScenario(name="takeoff_with_gear"),
                             trace_id="takeoff_with_gear")


@pytest.fixture(scope="session")
def buggy_trace():
    return demo.run_scenario(demo.FlightScenario(name="buggy_takeoff"),
                             trace_id="buggy_takeoff")


@pytest.fixture(scope="session")
def fig1_ftrace(takeoff_trace, fig1_config):
    return traces.filter_trace(takeoff_trace, fig1_config)
