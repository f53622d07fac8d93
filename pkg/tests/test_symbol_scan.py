import pytest

from tracelens import demo, symbols
from tracelens.errors import ManifestParseError, ScanIoError

LISTING_FIELDS = ["gear", "speed", "takeOffSpeed", "altitude", "groundAlt",
                  "safeAltForGearRetract"]


def scan_text(tmp_path, text, name="fixture.c"):
    path = tmp_path / name
    path.write_text(text)
    return symbols.scan_sources([str(path)])


def test_simple_fields_and_function(tmp_path):
    rep = scan_text(tmp_path, "int gear; float speed;\nvoid takeoff() {}\n")
    assert {(f.path, f.kind) for f in rep.symbols.fields} == {("gear", "int"),
                                                              ("speed", "float")}
    assert [fn.name for fn in rep.symbols.functions] == ["takeoff"]
    assert rep.skipped == []


def test_empty_file(tmp_path):
    rep = scan_text(tmp_path, "")
    assert rep.symbols.fields == () and rep.symbols.functions == ()
    assert rep.skipped == []


def test_struct_flattening(tmp_path):
    rep = scan_text(tmp_path, "struct P { float alt; int gear; } plane;\n")
    assert {(f.path, f.kind) for f in rep.symbols.fields} == {
        ("plane.alt", "float"), ("plane.gear", "int")}


def test_nested_struct_flattening(tmp_path):
    src = """
struct Inner { float x; float y; };
struct Outer { struct Inner pos; int id; };
struct Outer craft;
"""
    rep = scan_text(tmp_path, src)
    assert {f.path for f in rep.symbols.fields} == {"craft.pos.x", "craft.pos.y",
                                                    "craft.id"}


def test_small_array_indexes_large_array_skipped(tmp_path):
    rep = scan_text(tmp_path, "int a[3]; int big[64];\n")
    assert {f.path for f in rep.symbols.fields} == {"a[0]", "a[1]", "a[2]"}
    assert any("array bound" in reason for (_f, _l, reason) in rep.skipped)


def test_cyclic_struct_rejected(tmp_path):
    src = """
struct Node { int v; struct Node next; };
struct Node head;
"""
    rep = scan_text(tmp_path, src)
    assert any("cyclic" in reason for (_f, _l, reason) in rep.skipped)
    assert {f.path for f in rep.symbols.fields} == {"head.v"}


def test_typedef_one_level_only(tmp_path):
    src = """
typedef unsigned long tick_t;
typedef tick_t deep_t;
tick_t counter;
deep_t nope;
"""
    rep = scan_text(tmp_path, src)
    assert {(f.path, f.kind) for f in rep.symbols.fields} == {("counter", "int")}
    assert any("typedef chain" in reason for (_f, _l, reason) in rep.skipped)


def test_prototypes_contribute_nothing(tmp_path):
    rep = scan_text(tmp_path, "void helper(void);\nint work(int a) { return a; }\n")
    assert [fn.name for fn in rep.symbols.functions] == ["work"]


def test_pointers_and_macros_go_to_skipped(tmp_path):
    src = """
#define WIDTH 7
int *ptr;
MODULE_REGISTER(autopilot);
float ok_field;
"""
    rep = scan_text(tmp_path, src)
    assert {f.path for f in rep.symbols.fields} == {"ok_field"}
    reasons = [reason for (_f, _l, reason) in rep.skipped]
    assert any("pointer" in r for r in reasons)


def test_comments_and_strings_ignored(tmp_path):
    src = """
// int shadow1;
/* float shadow2; */
char *msg_skipped;
int real; /* trailing */
"""
    rep = scan_text(tmp_path, src)
    assert {f.path for f in rep.symbols.fields} == {"real"}


def test_enum_kinds(tmp_path):
    src = """
enum Mode { IDLE, ACTIVE };
enum Mode mode;
enum { A, B } flag;
"""
    rep = scan_text(tmp_path, src)
    assert {(f.path, f.kind) for f in rep.symbols.fields} == {("mode", "enum"),
                                                              ("flag", "enum")}


def test_scan_deterministic(tmp_path):
    src = "struct P { float alt; int gear; } plane;\nint gear;\nvoid f() {}\n"
    a = scan_text(tmp_path, src, "a.c")
    b = scan_text(tmp_path, src, "a.c")
    assert a.symbols == b.symbols and a.skipped == b.skipped


def test_unreadable_file_raises_scan_io(tmp_path):
    with pytest.raises(ScanIoError) as exc:
        symbols.scan_sources([str(tmp_path / "missing.c")])
    assert exc.value.code == "SCAN_IO"


def test_manifest_round_trip(tmp_path):
    table = demo.demo_symbol_table()
    path = tmp_path / "demo.manifest"
    symbols.save_manifest(table, str(path))
    assert symbols.load_manifest(str(path)) == table


def test_demo_manifest_has_the_six_fields():
    table = demo.demo_symbol_table()
    assert [f.path for f in table.fields] == LISTING_FIELDS


def test_manifest_duplicate_field_rejected():
    text = "field gear int\nfield gear int\n"
    with pytest.raises(ManifestParseError) as exc:
        symbols.parse_manifest(text)
    assert exc.value.code == "MANIFEST_PARSE" and exc.value.line_no == 2


def test_manifest_malformed_records():
    for text, line_no in [("field gear\n", 1), ("widget gear int\n", 1),
                          ("field gear int\nfunction f nofile\n", 2),
                          ("field gear quaternion\n", 1)]:
        with pytest.raises(ManifestParseError) as exc:
            symbols.parse_manifest(text)
        assert exc.value.line_no == line_no
