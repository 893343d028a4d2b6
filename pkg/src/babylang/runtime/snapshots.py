"""Immutable, depth-limited value snapshots.

A snapshot records a value's type and identity before copying it, so later
mutation of the live value never changes what a probe captured. Cycles are
marked, never expanded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import values as V


@dataclass(frozen=True)
class ValueSnapshot:
    type_tag: str
    identity_id: Optional[int] = None
    scalar: object = None                      # leaf payload
    fields: Optional[tuple] = None             # ((name, ValueSnapshot), ...)
    items: Optional[tuple] = None              # (ValueSnapshot, ...)
    truncated: bool = False
    cycle: bool = False

    def render_text(self) -> str:
        """Compact JSON-ish text for probe rows."""
        if self.cycle:
            return "<cycle>"
        if self.truncated:
            return "…"
        if self.items is not None:
            return "[" + ", ".join(i.render_text() for i in self.items) + "]"
        if self.fields is not None:
            inner = ", ".join(f"{name}: {snap.render_text()}" for name, snap in self.fields)
            prefix = "" if self.type_tag == "object" else self.type_tag + " "
            return prefix + "{" + inner + "}"
        if self.type_tag == "string":
            escaped = (str(self.scalar).replace("\\", "\\\\")
                       .replace("\n", "\\n").replace("\t", "\\t"))
            return f'"{escaped}"'
        if self.type_tag == "number":
            return V.format_number(self.scalar)
        if self.type_tag == "boolean":
            return "true" if self.scalar else "false"
        if self.type_tag == "null":
            return "null"
        if self.type_tag == "function":
            return "<function>"
        return f"<{self.type_tag}>"

    def to_json(self) -> dict:
        doc: dict = {"type": self.type_tag}
        if self.identity_id is not None:
            doc["id"] = self.identity_id
        if self.cycle:
            doc["cycle"] = True
        elif self.truncated:
            doc["truncated"] = True
        elif self.items is not None:
            doc["items"] = [i.to_json() for i in self.items]
        elif self.fields is not None:
            doc["fields"] = {name: snap.to_json() for name, snap in self.fields}
        elif self.type_tag not in ("null", "function", "class", "resource"):
            doc["value"] = self.scalar
        return doc


class IdentityRegistry:
    """Per-run identity ids: the same live object always maps to the same id,
    distinct objects never share one. Held references keep ids from being
    recycled within the run."""

    def __init__(self):
        self._ids: dict[int, int] = {}
        self._keepalive: list = []
        self._next = 1

    def identity_of(self, value) -> Optional[int]:
        if V.identity_of(value) is None:
            return None
        key = id(value)
        found = self._ids.get(key)
        if found is None:
            found = self._next
            self._next += 1
            self._ids[key] = found
            self._keepalive.append(value)
        return found


_DEFAULT_REGISTRY = IdentityRegistry()


def snapshot(value, depth: int = 3, identity: "IdentityRegistry | None" = None) -> ValueSnapshot:
    """Deep copy down to `depth` levels; functions are type-only leaves."""
    if depth < 1:
        raise ValueError("snapshot depth must be >= 1")
    registry = identity if identity is not None else _DEFAULT_REGISTRY
    return _snap(value, depth, on_path=(), registry=registry)


def _snap(value, depth: int, on_path: tuple, registry: IdentityRegistry) -> ValueSnapshot:
    tag = V.type_tag(value)
    ident = registry.identity_of(value)
    if ident is not None and ident in on_path:
        return ValueSnapshot(type_tag=tag, identity_id=ident, cycle=True)

    if value is None:
        return ValueSnapshot(type_tag="null")
    if isinstance(value, bool) or isinstance(value, float) or isinstance(value, str):
        return ValueSnapshot(type_tag=tag, scalar=value)
    if V.is_callable(value):
        return ValueSnapshot(type_tag="function", identity_id=ident)
    if isinstance(value, V.BabyClass):
        return ValueSnapshot(type_tag="class", identity_id=ident, scalar=value.name)
    if isinstance(value, V.HostResource):
        return ValueSnapshot(type_tag="resource", identity_id=ident, scalar=value.name)

    if depth <= 0:
        return ValueSnapshot(type_tag=tag, identity_id=ident, truncated=True)
    path = on_path + (ident,) if ident is not None else on_path
    if isinstance(value, V.BabyArray):
        return ValueSnapshot(
            type_tag="array", identity_id=ident,
            items=tuple(_snap(item, depth - 1, path, registry) for item in value.items))
    if isinstance(value, V.BabyObject):
        return ValueSnapshot(
            type_tag=tag, identity_id=ident,
            fields=tuple((name, _snap(v, depth - 1, path, registry))
                         for name, v in value.props.items()))
    if isinstance(value, V.HostNamespace):
        return ValueSnapshot(type_tag="object", identity_id=ident, fields=())
    return ValueSnapshot(type_tag=tag, identity_id=ident, truncated=True)
