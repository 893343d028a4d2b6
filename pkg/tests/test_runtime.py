"""Value model, snapshots, interpreter semantics, trace queries."""

from __future__ import annotations

import math

import pytest

from babylang.instrument import InstrumentConfig
from babylang.lang import parse_expression_text, parse_module
from babylang.runtime import (BabyArray, BabyObject, BabyRuntimeError, Evaluation,
                              IdentityRegistry, NeedsUserInput, UnknownProbe,
                              format_number, loose_equals, query_probe, snapshot,
                              strict_equals, to_property_key, to_text, truthy)
from babylang.runtime.tracing import TraceStore
from babylang.session import run_with_deep_stack


def run_program(source: str, expr: str = None, resources=None):
    """Execute a plain module and optionally evaluate one expression in it."""
    config = InstrumentConfig()
    ev = Evaluation({}, config, plain_loader=lambda name: source if name == "m" else None,
                    resources=resources)
    instance = ev.load_module("m")
    if expr is None:
        return ev, instance
    return ev.eval_expr(parse_expression_text(expr), instance.env)


# --- number formatting -----------------------------------------------------------

@pytest.mark.parametrize("value, expected", [
    (3.0, "3"),
    (-1.0, "-1"),
    (0.5, "0.5"),
    (75.2, "75.2"),
    (4294967296.0, "4294967296"),
    (152587890625.0, "152587890625"),
    (2.3283064365386964e+22, "2.3283064365386964e+22"),
    (1e21, "1e+21"),
    (1e-7, "1e-7"),
    (float("nan"), "NaN"),
    (float("inf"), "Infinity"),
    (float("-inf"), "-Infinity"),
    (-0.0, "0"),
])
def test_format_number(value, expected):
    assert format_number(value) == expected


# --- equality and coercion ----------------------------------------------------------

def test_strict_equality_is_identity_for_objects():
    a = BabyArray([1.0])
    b = BabyArray([1.0])
    assert strict_equals(a, a)
    assert not strict_equals(a, b)
    assert strict_equals(1.0, 1.0)
    assert not strict_equals(1.0, "1")
    assert not strict_equals(True, 1.0)


def test_loose_equality_coerces_number_and_text_only():
    assert loose_equals(5.0, "5")
    assert loose_equals("5", 5.0)
    assert not loose_equals(True, 1.0)
    assert not loose_equals("x", 0.0)
    assert loose_equals(None, None)


def test_truthiness():
    assert not truthy(None) and not truthy(False) and not truthy(0.0)
    assert not truthy("") and not truthy(float("nan"))
    assert truthy(BabyArray([])) and truthy(BabyObject({})) and truthy("0")


def test_to_text_and_property_keys():
    assert to_text(BabyArray([4.0, 5.0, 6.0, 7.0])) == "4,5,6,7"
    assert to_text(BabyObject({})) == "[object Object]"
    assert to_property_key(BabyArray([1.0, 2.0])) == "1,2"
    assert to_property_key(3.0) == "3"


# --- snapshots ------------------------------------------------------------------------

def test_snapshot_scalar_leaf():
    snap = snapshot(3.0)
    assert snap.type_tag == "number" and snap.scalar == 3.0
    assert snap.identity_id is None


def test_snapshot_two_field_record():
    obj = BabyObject({"name": "David", "hobby": "testing"})
    snap = snapshot(obj)
    assert snap.type_tag == "object"
    assert dict((k, v.scalar) for k, v in snap.fields) == \
        {"name": "David", "hobby": "testing"}
    assert snap.render_text() == '{name: "David", hobby: "testing"}'


def test_snapshot_marks_cycles_and_terminates():
    obj = BabyObject({})
    obj.props["self"] = obj
    snap = snapshot(obj, depth=3)
    assert snap.fields[0][1].cycle


def test_snapshot_depth_truncation():
    deep = BabyObject({"a": BabyObject({"b": BabyObject({"c": BabyObject({"d": 1.0})})})})
    snap = snapshot(deep, depth=2)
    level2 = snap.fields[0][1].fields[0][1]
    assert level2.truncated


def test_snapshot_is_detached_from_later_mutation():
    obj = BabyObject({"hobby": "debugging"})
    before = snapshot(obj)
    obj.props["hobby"] = "testing"
    after = snapshot(obj)
    assert before.fields[0][1].scalar == "debugging"
    assert after.fields[0][1].scalar == "testing"


def test_identity_registry_same_object_same_id():
    registry = IdentityRegistry()
    a = BabyArray([1.0])
    b = BabyArray([1.0])
    first = snapshot(a, identity=registry)
    again = snapshot(a, identity=registry)
    other = snapshot(b, identity=registry)
    assert first.identity_id == again.identity_id
    assert first.identity_id != other.identity_id


def test_snapshot_function_is_type_only_leaf():
    ev, instance = run_program("function f() {\n    return 1;\n}\n")
    fn = instance.env.lookup("f")
    snap = snapshot(fn)
    assert snap.type_tag == "function"
    assert snap.fields is None and snap.items is None


def test_snapshot_rejects_zero_depth():
    with pytest.raises(ValueError):
        snapshot(1.0, depth=0)


# --- interpreter semantics ---------------------------------------------------------

def test_arithmetic_and_shift():
    assert run_program("", "(3 + 5) >> 1") == 4.0
    assert run_program("", "7 % 3") == 1.0
    assert run_program("", "-7 % 3") == -1.0
    assert run_program("", "1 / 0") == float("inf")
    assert math.isnan(run_program("", "0 / 0"))
    assert run_program("", '"a" + 1') == "a1"
    with pytest.raises(BabyRuntimeError):
        run_program("", "null * 2")


def test_string_comparison_and_mixed_compare_error():
    assert run_program("", '"c" < "g"') is True
    with pytest.raises(BabyRuntimeError):
        run_program("", '"c" < 3')


def test_template_literal_interpolation():
    src = 'var name = "Alice";\nvar msg = `Hi, Im ${name}${1 + 1}`;\n'
    ev, inst = run_program(src)
    assert inst.env.lookup("msg") == "Hi, Im Alice2"


def test_closures_and_arrows():
    src = ("function makeAdder(n) {\n"
           "    return (x) => x + n;\n"
           "}\n"
           "var add2 = makeAdder(2);\n"
           "var six = add2(4);\n")
    ev, inst = run_program(src)
    assert inst.env.lookup("six") == 6.0


def test_classes_methods_statics_and_new():
    src = ("class Point {\n"
           "    constructor(x, y) {\n"
           "        this.x = x;\n"
           "        this.y = y;\n"
           "    }\n"
           "    norm() {\n"
           "        return Math.sqrt(this.x * this.x + this.y * this.y);\n"
           "    }\n"
           "    static origin() {\n"
           "        return new Point(0, 0);\n"
           "    }\n"
           "}\n"
           "var p = new Point(3, 4);\n"
           "var n = p.norm();\n"
           "var o = Point.origin();\n")
    ev, inst = run_program(src)
    assert inst.env.lookup("n") == 5.0
    assert inst.env.lookup("o").props == {"x": 0.0, "y": 0.0}


def test_array_append_idiom_and_string_index():
    src = ("var items = [];\n"
           "items[items.length] = \"x\";\n"
           "items[items.length] = \"y\";\n"
           "var c = \"abc\"[1];\n")
    ev, inst = run_program(src)
    assert inst.env.lookup("items").items == ["x", "y"]
    assert inst.env.lookup("c") == "b"
    assert run_program("", "[1, 2, 3][9]") is None


def test_var_is_function_scoped_let_is_block_scoped():
    src = ("function f() {\n"
           "    if (true) {\n"
           "        var a = 1;\n"
           "        let b = 2;\n"
           "    }\n"
           "    return a;\n"
           "}\n"
           "var out = f();\n")
    ev, inst = run_program(src)
    assert inst.env.lookup("out") == 1.0
    src2 = src.replace("return a;", "return b;")
    ev2 = Evaluation({}, InstrumentConfig(),
                     plain_loader=lambda n: src2 if n == "m" else None)
    from babylang.runtime import ModuleError
    with pytest.raises(ModuleError):
        ev2.load_module("m")


def test_const_reassignment_errors():
    with pytest.raises(Exception) as err:
        run_program("const k = 1;\nk = 2;\n")
    assert "constant" in str(err.value)


def test_prompt_raises_needs_user_input():
    from babylang.runtime import ModuleError
    with pytest.raises(ModuleError) as err:
        run_program('var a = prompt("q");')
    assert "replacement" in str(err.value)


def test_console_log_and_json_builtins():
    src = ('console.log("hello", 1);\n'
           'var copy = JSON.parse(JSON.stringify({a: [1, 2], b: "x"}));\n'
           'var t = JSON.stringify(copy);\n')
    ev, inst = run_program(src)
    assert ev.load_output["m"] == ["hello 1"]
    assert inst.env.lookup("t") == '{"a":[1,2],"b":"x"}'
    original = run_program("", '{a: 1}')
    copy = inst.env.lookup("copy")
    assert copy.props["a"].items == [1.0, 2.0]


def test_date_now_is_number():
    value = run_program("", "Date.now()")
    assert isinstance(value, float) and value > 0


def test_recursion_limit_is_runtime_error():
    src = ("function forever(n) {\n"
           "    return forever(n + 1);\n"
           "}\n")

    def go():
        ev, inst = run_program(src)
        fn = inst.env.lookup("forever")
        with pytest.raises(BabyRuntimeError) as err:
            ev.invoke(fn, None, [0.0])
        assert "call depth" in str(err.value)
        return True

    assert run_with_deep_stack(go)


def test_missing_name_errors():
    with pytest.raises(Exception) as err:
        run_program("var a = ghost;")
    assert "ghost is not defined" in str(err.value)


def test_member_access_semantics():
    assert run_program('var o = {a: 1};', "o.missing") is None
    assert run_program('var items = [1];', "items.length") == 1.0
    with pytest.raises(BabyRuntimeError):
        run_program("", "null.x".replace("null", "(null)"))


# --- trace store ---------------------------------------------------------------------

def _store_with_events():
    store = TraceStore()
    store.register_probe("m:p0", 7, "mid")
    store.register_slider("m:s0", 3)
    for i, value in enumerate((2.0, 4.0, 5.0), start=1):
        store.record("m:p0", "m:e0", "after", (("m:s0", i),), snapshot(value))
    return store


def test_query_probe_orders_by_seq():
    store = _store_with_events()
    events = query_probe(store, "m:p0")
    assert [e.snapshot.scalar for e in events] == [2.0, 4.0, 5.0]
    assert [e.seq for e in events] == sorted(e.seq for e in events)


def test_query_probe_slider_position():
    store = _store_with_events()
    events = query_probe(store, "m:p0", slider_position=("m:s0", 2))
    assert [e.snapshot.scalar for e in events] == [4.0]


def test_query_probe_example_filter_empty():
    store = _store_with_events()
    assert query_probe(store, "m:p0", example_filter="m:e9") == []


def test_query_probe_unknown():
    with pytest.raises(UnknownProbe):
        query_probe(TraceStore(), "nope:p0")


def test_slider_filter_matches_innermost_activation():
    store = TraceStore()
    store.register_probe("m:p0", 1, "x")
    store.register_slider("m:s0", 2)
    # recursive activations: capture in activation 3 carries 1..3 on the vector
    store.record("m:p0", "m:e0", "after", (("m:s0", 1),), snapshot(10.0))
    store.record("m:p0", "m:e0", "after", (("m:s0", 1), ("m:s0", 2)), snapshot(20.0))
    store.record("m:p0", "m:e0", "after", (("m:s0", 1), ("m:s0", 2), ("m:s0", 3)), snapshot(30.0))
    at2 = query_probe(store, "m:p0", slider_position=("m:s0", 2))
    assert [e.snapshot.scalar for e in at2] == [20.0]
