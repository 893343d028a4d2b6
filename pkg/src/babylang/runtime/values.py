"""Runtime values and their operators.

Numbers are 64-bit floats. Arrays and objects carry identity ids assigned
at construction from a monotone session counter, so two captures of the
same live object share an id and equal-content clones do not.
"""

from __future__ import annotations

import itertools
import math
from typing import Any, Callable, Optional

from ..lang import nodes as N


class BabyError(Exception):
    """Base for errors raised inside example evaluation."""
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class BabyRuntimeError(BabyError):
    pass


class BabyTimeout(BabyError):
    def __init__(self, message: str = "example exceeded its time budget"):
        super().__init__(message)


class NeedsUserInput(BabyRuntimeError):
    pass


class ModuleError(BabyError):
    """A module's top level failed; all of its examples are aborted."""


_identity_counter = itertools.count(1)


def next_identity() -> int:
    return next(_identity_counter)


class BabyArray:
    __slots__ = ("items", "obj_id")

    def __init__(self, items: Optional[list] = None):
        self.items = items if items is not None else []
        self.obj_id = next_identity()

    def __repr__(self):
        return f"BabyArray#{self.obj_id}({self.items!r})"


class BabyObject:
    __slots__ = ("props", "baby_class", "obj_id")

    def __init__(self, props: Optional[dict] = None, baby_class: "BabyClass | None" = None):
        self.props = props if props is not None else {}
        self.baby_class = baby_class
        self.obj_id = next_identity()

    def __repr__(self):
        name = self.baby_class.name if self.baby_class else "object"
        return f"Baby<{name}>#{self.obj_id}({self.props!r})"


class BabyClass:
    __slots__ = ("name", "ctor", "methods", "static_methods", "props", "obj_id")

    def __init__(self, name: str):
        self.name = name
        self.ctor: BabyFunction | None = None
        self.methods: dict[str, BabyFunction] = {}
        self.static_methods: dict[str, BabyFunction] = {}
        self.props: dict[str, Any] = {}
        self.obj_id = next_identity()

    def __repr__(self):
        return f"BabyClass({self.name})"


class BabyFunction:
    __slots__ = ("name", "params", "body", "closure", "is_arrow", "obj_id", "home_module")

    def __init__(self, name: str, params: list[str], body, closure, is_arrow: bool = False,
                 home_module: str = ""):
        self.name = name
        self.params = params
        self.body = body  # Block node, or expression node for bare arrows
        self.closure = closure
        self.is_arrow = is_arrow
        self.obj_id = next_identity()
        self.home_module = home_module

    def __repr__(self):
        return f"BabyFunction({self.name or '<anonymous>'})"


class BoundMethod:
    __slots__ = ("func", "receiver", "obj_id")

    def __init__(self, func: BabyFunction, receiver):
        self.func = func
        self.receiver = receiver
        self.obj_id = func.obj_id

    def __repr__(self):
        return f"BoundMethod({self.func.name})"


class HostFunction:
    __slots__ = ("name", "fn", "obj_id")

    def __init__(self, name: str, fn: Callable):
        self.name = name
        self.fn = fn
        self.obj_id = next_identity()

    def __repr__(self):
        return f"HostFunction({self.name})"


class HostNamespace:
    """A read-only bag of host functions (Math, console, JSON, Date)."""
    __slots__ = ("name", "members", "obj_id")

    def __init__(self, name: str, members: dict):
        self.name = name
        self.members = members
        self.obj_id = next_identity()


class HostResource:
    """A host-owned value referenced by name; persists across evaluations."""
    __slots__ = ("name", "members", "obj_id")

    def __init__(self, name: str, members: Optional[dict] = None):
        self.name = name
        self.members = members if members is not None else {}
        self.obj_id = next_identity()


FUNCTION_TYPES = (BabyFunction, BoundMethod, HostFunction)


def is_callable(value) -> bool:
    return isinstance(value, FUNCTION_TYPES)


def type_tag(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, float):
        return "number"
    if isinstance(value, str):
        return "string"
    if isinstance(value, BabyArray):
        return "array"
    if isinstance(value, BabyObject):
        return value.baby_class.name if value.baby_class else "object"
    if isinstance(value, BabyClass):
        return "class"
    if is_callable(value):
        return "function"
    if isinstance(value, HostNamespace):
        return "object"
    if isinstance(value, HostResource):
        return "resource"
    return "host"


def identity_of(value) -> Optional[int]:
    if isinstance(value, (BabyArray, BabyObject, BabyClass, HostResource)):
        return value.obj_id
    if is_callable(value):
        return value.obj_id
    return None


def truthy(value) -> bool:
    if value is None or value is False:
        return False
    if value is True:
        return True
    if isinstance(value, float):
        return not (value == 0.0 or math.isnan(value))
    if isinstance(value, str):
        return value != ""
    return True


def format_number(x: float) -> str:
    """Number-to-text matching host-language conventions: integral values
    below 1e21 print without a decimal point, larger ones in exponent form."""
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if x == int(x) and abs(x) < 1e21:
        return str(int(x))
    text = repr(x)
    # 1e-07 -> 1e-7 (single-digit exponents carry no leading zero)
    if "e" in text:
        mantissa, _, exponent = text.partition("e")
        sign = exponent[0] if exponent[0] in "+-" else "+"
        digits = exponent.lstrip("+-").lstrip("0") or "0"
        text = f"{mantissa}e{sign}{digits}"
    return text


def to_text(value) -> str:
    """String conversion for concatenation, templates and property keys."""
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_number(value)
    if isinstance(value, str):
        return value
    if isinstance(value, BabyArray):
        return ",".join(to_text(item) for item in value.items)
    if isinstance(value, (BabyObject, HostNamespace)):
        return "[object Object]"
    if isinstance(value, BabyClass):
        return f"class {value.name}"
    if isinstance(value, BabyFunction):
        return f"function {value.name or ''}() {{ ... }}"
    if isinstance(value, BoundMethod):
        return f"function {value.func.name}() {{ ... }}"
    if isinstance(value, HostFunction):
        return f"function {value.name}() {{ [host] }}"
    if isinstance(value, HostResource):
        return f"[resource {value.name}]"
    return str(value)


def to_property_key(value) -> str:
    return to_text(value)


def strict_equals(a, b) -> bool:
    """`===`: identity for arrays/objects/functions, value equality for scalars."""
    if a is None or b is None:
        return a is None and b is None
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    if isinstance(a, float) and isinstance(b, float):
        return a == b
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    return a is b


def loose_equals(a, b) -> bool:
    """`==`: like `===` plus number<->text coercion, nothing else."""
    if isinstance(a, float) and isinstance(b, str):
        return _text_to_number(b) == a
    if isinstance(a, str) and isinstance(b, float):
        return _text_to_number(a) == b
    return strict_equals(a, b)


def _text_to_number(text: str) -> float:
    stripped = text.strip()
    if stripped == "":
        return 0.0
    try:
        return float(stripped)
    except ValueError:
        return float("nan")
