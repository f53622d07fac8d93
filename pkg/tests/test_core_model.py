import pytest
from hypothesis import given, strategies as st

from tracelens import demo
from tracelens.core import (ConstraintSpec, MonitorConfig, Operand, RangeFilter, SymbolTable,
                            FieldDecl, FunctionDecl, snapshot_diff, validate_config,
                            values_equal)
from tracelens.errors import DiffKeyMismatch


def table():
    return demo.demo_symbol_table()


def test_validate_wellformed_config_has_no_findings(table1_config):
    assert validate_config(table1_config, table()) == []


def test_validate_empty_range_constant_bounds():
    cfg = MonitorConfig(
        name="bad", fields=("gear",), functions=(),
        constraints=(ConstraintSpec("range", "gear", Operand(const=5), Operand(const=5)),))
    codes = [f.code for f in validate_config(cfg, table())]
    assert "RANGE_EMPTY" in codes


def test_validate_unknown_function():
    cfg = MonitorConfig(name="bad", fields=("gear",), functions=("takeoffX",),
                        constraints=(ConstraintSpec("value_change", "gear"),))
    codes = [f.code for f in validate_config(cfg, table())]
    assert codes == ["UNKNOWN_FUNCTION"]


def test_validate_unknown_and_unselected_fields():
    cfg = MonitorConfig(name="bad", fields=("gear",), functions=(),
                        constraints=(ConstraintSpec("value_change", "speed"),))
    codes = {f.code for f in validate_config(cfg, table())}
    assert codes == {"FIELD_NOT_SELECTED"}
    cfg2 = MonitorConfig(name="bad2", fields=("nosuch",), functions=(),
                         constraints=(ConstraintSpec("value_change", "nosuch"),))
    codes2 = [f.code for f in validate_config(cfg2, table())]
    assert codes2.count("UNKNOWN_FIELD") == 2  # selected list and constraint reference


def test_validate_no_constraints():
    cfg = MonitorConfig(name="empty", fields=("gear",), functions=(), constraints=())
    assert [f.code for f in validate_config(cfg, table())] == ["NO_CONSTRAINTS"]


def test_symbol_table_rejects_duplicate_paths():
    with pytest.raises(ValueError):
        SymbolTable(fields=(FieldDecl("a", "int"), FieldDecl("a", "float")), functions=())


def test_symbol_table_rejects_duplicate_functions():
    with pytest.raises(ValueError):
        SymbolTable(fields=(), functions=(FunctionDecl("f", "x.c", 1),
                                          FunctionDecl("f", "x.c", 9)))


def test_constraint_arity_enforced():
    with pytest.raises(ValueError):
        ConstraintSpec("value_change", "x", Operand(const=1))
    with pytest.raises(ValueError):
        ConstraintSpec("cmp", "x")
    with pytest.raises(ValueError):
        ConstraintSpec("range", "x", Operand(const=1))


def test_range_filter_bounds():
    with pytest.raises(ValueError):
        RangeFilter("x", 2.0, 1.0)


def test_snapshot_diff_gear_change():
    assert snapshot_diff({"gear": 0}, {"gear": 1}, 0) == {"gear"}


def test_snapshot_diff_identity():
    snap = {"gear": 1, "alt": -1.0}
    assert snapshot_diff(snap, dict(snap), 0) == set()


def test_snapshot_diff_float_tolerance():
    assert snapshot_diff({"alt": 1.0}, {"alt": 1.0 + 1e-12}, 1e-9) == set()
    assert snapshot_diff({"alt": 1.0}, {"alt": 1.0 + 1e-6}, 1e-9) == {"alt"}


def test_snapshot_diff_key_mismatch():
    with pytest.raises(DiffKeyMismatch) as exc:
        snapshot_diff({"a": 1}, {"b": 1}, 0)
    assert exc.value.code == "DIFF_KEY_MISMATCH"


@given(st.dictionaries(st.sampled_from("abcd"), st.integers(-5, 5), min_size=1),
       st.dictionaries(st.sampled_from("abcd"), st.integers(-5, 5)))
def test_snapshot_diff_symmetric(before, delta):
    after = dict(before)
    for k, v in delta.items():
        if k in after:
            after[k] = v
    assert snapshot_diff(before, after, 0) == snapshot_diff(after, before, 0)


@given(st.integers(-100, 100), st.integers(-100, 100))
def test_int_equality_is_exact_even_with_eps(a, b):
    # int/bool/enum snapshots compare exactly; eps only widens float equality
    assert values_equal(a, b, 0.5) == (a == b)
    assert values_equal(float(a), float(b), 0.5) == (abs(a - b) <= 0.5)
