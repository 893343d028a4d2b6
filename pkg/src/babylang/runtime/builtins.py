"""Host builtins available to BabyLang code."""

from __future__ import annotations

import json
import math
import time

from . import values as V


def _num(args, i, name, default=None):
    if i >= len(args):
        if default is not None:
            return default
        raise V.BabyRuntimeError(f"{name} expects a number argument")
    v = args[i]
    if not isinstance(v, float) or isinstance(v, bool):
        raise V.BabyRuntimeError(f"{name} expects a number, got {V.type_tag(v)}")
    return v


def _math_floor(ctx, args):
    return float(math.floor(_num(args, 0, "Math.floor")))


def _math_sqrt(ctx, args):
    x = _num(args, 0, "Math.sqrt")
    return math.sqrt(x) if x >= 0 else float("nan")


def _console_log(ctx, args):
    ctx.emit_output(" ".join(V.to_text(a) for a in args))
    return None


def _console_warn(ctx, args):
    ctx.emit_output("warning: " + " ".join(V.to_text(a) for a in args))
    return None


def _prompt(ctx, args):
    message = V.to_text(args[0]) if args else ""
    raise V.NeedsUserInput(
        f"prompt({message!r}) needs user input; add a replacement to run this example")


def _date_now(ctx, args):
    return float(int(time.time() * 1000))


def _json_stringify(ctx, args):
    if not args:
        return "null"
    return json.dumps(_to_jsonable(args[0]), separators=(",", ":"), ensure_ascii=False)


def _to_jsonable(value, depth: int = 0):
    if depth > 64:
        raise V.BabyRuntimeError("JSON.stringify: structure too deep (cycle?)")
    if value is None or isinstance(value, bool) or isinstance(value, str):
        return value
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return None
        return int(value) if value == int(value) else value
    if isinstance(value, V.BabyArray):
        return [_to_jsonable(v, depth + 1) for v in value.items]
    if isinstance(value, V.BabyObject):
        return {k: _to_jsonable(v, depth + 1) for k, v in value.props.items()
                if not V.is_callable(v)}
    return None  # functions, classes, resources drop to null


def _json_parse(ctx, args):
    if not args or not isinstance(args[0], str):
        raise V.BabyRuntimeError("JSON.parse expects a string")
    try:
        data = json.loads(args[0])
    except json.JSONDecodeError as exc:
        raise V.BabyRuntimeError(f"JSON.parse: {exc}")
    return _from_jsonable(data)


def _from_jsonable(data):
    if data is None or isinstance(data, bool) or isinstance(data, str):
        return data
    if isinstance(data, (int, float)):
        return float(data)
    if isinstance(data, list):
        return V.BabyArray([_from_jsonable(v) for v in data])
    return V.BabyObject({k: _from_jsonable(v) for k, v in data.items()})


class CanvasMock(V.HostResource):
    """A draw-surface stand-in: records every method call it receives."""

    def __init__(self, name: str = "canvas"):
        super().__init__(name)
        self.log: list[tuple[str, tuple]] = []

    def member(self, prop: str):
        if prop == "strokes":
            return V.HostFunction("strokes", lambda ctx, args: float(len(self.log)))
        if prop == "clear":
            def _clear(ctx, args):
                self.log.clear()
                return None
            return V.HostFunction("clear", _clear)
        def _record(ctx, args, _prop=prop):
            self.log.append((_prop, tuple(args)))
            return None
        return V.HostFunction(prop, _record)


def make_builtins() -> dict:
    return {
        "Math": V.HostNamespace("Math", {
            "floor": V.HostFunction("Math.floor", _math_floor),
            "sqrt": V.HostFunction("Math.sqrt", _math_sqrt),
        }),
        "console": V.HostNamespace("console", {
            "log": V.HostFunction("console.log", _console_log),
            "warn": V.HostFunction("console.warn", _console_warn),
        }),
        "JSON": V.HostNamespace("JSON", {
            "stringify": V.HostFunction("JSON.stringify", _json_stringify),
            "parse": V.HostFunction("JSON.parse", _json_parse),
        }),
        "Date": V.HostNamespace("Date", {
            "now": V.HostFunction("Date.now", _date_now),
        }),
        "prompt": V.HostFunction("prompt", _prompt),
    }
