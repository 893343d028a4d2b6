"""Instrumentation configuration."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass
class InstrumentConfig:
    time_budget_ms: float = 500.0
    snapshot_depth: int = 3
    # Module names open in the session; their imports are rewritten to the
    # instrumented registry instead of plain file loads.
    session_modules: set[str] = field(default_factory=set)
    # Module names resolvable as plain files; None disables the check.
    known_files: Optional[set[str]] = None
    # Names usable from @template:/@custom: and @resource: value specs.
    template_names: set[str] = field(default_factory=set)
    custom_template_names: set[str] = field(default_factory=set)
    resource_names: set[str] = field(default_factory=set)

    def __post_init__(self):
        if self.time_budget_ms <= 0:
            raise ValueError("time_budget_ms must be positive")
        if self.snapshot_depth < 1:
            raise ValueError("snapshot_depth must be positive")
