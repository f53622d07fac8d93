import pytest

from tracelens import demo, traces
from tracelens.demo import FlightScenario, run_scenario


def field_series(trace, field):
    return [ev.vars[field] for ev in trace.events]


def test_takeoff_single_sign_change(takeoff_trace):
    alts = field_series(takeoff_trace, "altitude")
    signs = [a > 0 for a in alts]
    changes = sum(1 for i in range(len(signs) - 1) if signs[i] != signs[i + 1])
    assert changes == 1
    assert alts[0] == -1.0
    assert all(a != 0 for a in alts)


def test_takeoff_noop_before_liftoff(takeoff_trace):
    # every takeoff call before the liftoff leaves altitude unchanged
    events = takeoff_trace.events
    for i, ev in enumerate(events):
        if ev.fn == "takeoff" and ev.kind == "exit" and ev.vars["altitude"] < 0:
            enter = next(e for e in events[i::-1] if e.fn == "takeoff" and e.kind == "enter")
            assert enter.vars["altitude"] == ev.vars["altitude"]


def test_gear_changes_exactly_once(gear_trace):
    gears = field_series(gear_trace, "gear")
    flips = sum(1 for i in range(len(gears) - 1) if gears[i] != gears[i + 1])
    assert flips == 1
    assert set(gears) == {0, 1}


def test_single_tick_is_inert():
    trace = run_scenario(FlightScenario(name="takeoff", ticks=1))
    alts = field_series(trace, "altitude")
    assert set(alts) == {-1.0}
    assert max(field_series(trace, "speed")) < 60.0


def test_determinism_byte_identical():
    a = run_scenario(FlightScenario(name="full_flight"), trace_id="ff")
    b = run_scenario(FlightScenario(name="full_flight"), trace_id="ff")
    assert traces.serialize_trace(a) == traces.serialize_trace(b)


@pytest.mark.parametrize("name", demo.SCENARIOS)
def test_monotone_counters(name):
    trace = run_scenario(FlightScenario(name=name))
    speeds = field_series(trace, "speed")
    alts = field_series(trace, "altitude")
    gears = field_series(trace, "gear")
    assert all(a <= b for a, b in zip(speeds, speeds[1:]))
    assert all(a <= b for a, b in zip(alts, alts[1:]))
    assert set(gears) <= {0, 1}
    assert sum(1 for i in range(len(gears) - 1) if gears[i] != gears[i + 1]) <= 1


def test_buggy_gear_retracts_below_safe_altitude(gear_trace, buggy_trace):
    def gear_flip_altitude(trace):
        events = trace.events
        for i in range(len(events) - 1):
            if events[i].vars["gear"] == 0 and events[i + 1].vars["gear"] == 1:
                return events[i + 1].vars["altitude"]
        raise AssertionError("gear never flipped")

    safe = 100.0
    assert gear_flip_altitude(gear_trace) > safe
    assert gear_flip_altitude(buggy_trace) < safe


def test_scenario_param_validation():
    with pytest.raises(ValueError):
        FlightScenario(name="warp_drive")
    with pytest.raises(ValueError):
        FlightScenario(name="takeoff", ticks=0)
    with pytest.raises(ValueError):
        FlightScenario(name="takeoff", accel_step=-1)


def test_scenario_from_params_coercion():
    sc = demo.scenario_from_params("takeoff", {"ticks": "3", "accel_step": "20"})
    assert sc.ticks == 3 and sc.accel_step == 20.0
    with pytest.raises(ValueError):
        demo.scenario_from_params("takeoff", {"warp": 9})
