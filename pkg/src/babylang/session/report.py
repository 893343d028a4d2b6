"""Evaluation reports and their canonical serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional


@dataclass
class PhaseTimings:
    parse_ms: float = 0.0
    transform_ms: float = 0.0
    execute_ms: float = 0.0
    update_ms: float = 0.0

    @property
    def adaptation_ms(self) -> float:
        return self.parse_ms + self.transform_ms

    @property
    def emergence_ms(self) -> float:
        return self.execute_ms + self.update_ms

    def to_json(self) -> dict:
        return {
            "parse_ms": self.parse_ms, "transform_ms": self.transform_ms,
            "execute_ms": self.execute_ms, "update_ms": self.update_ms,
            "adaptation_ms": self.adaptation_ms, "emergence_ms": self.emergence_ms,
        }


@dataclass
class ModuleSection:
    name: str
    source: str
    examples: list[dict] = field(default_factory=list)
    probes: list[dict] = field(default_factory=list)
    sliders: list[dict] = field(default_factory=list)
    faded_lines: list[int] = field(default_factory=list)
    executable_lines: list[int] = field(default_factory=list)
    eligibility: dict[str, list[str]] = field(default_factory=dict)
    diagnostics: list[dict] = field(default_factory=list)
    stale: bool = False
    load_output: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "examples": self.examples,
            "probes": self.probes,
            "sliders": self.sliders,
            "faded_lines": self.faded_lines,
            "executable_lines": self.executable_lines,
            "eligibility": self.eligibility,
            "diagnostics": self.diagnostics,
            "stale": self.stale,
            "load_output": self.load_output,
        }


@dataclass
class EvaluationReport:
    revision: int
    modules: dict[str, ModuleSection] = field(default_factory=dict)
    timings: PhaseTimings = field(default_factory=PhaseTimings)
    diagnostics: list[dict] = field(default_factory=list)
    any_example_enabled: bool = False
    serialized: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "revision": self.revision,
            "modules": {name: section.to_json() for name, section in self.modules.items()},
            "diagnostics": self.diagnostics,
            "any_example_enabled": self.any_example_enabled,
            "timings": self.timings.to_json(),
        }

    def serialize(self) -> str:
        """Canonical key-sorted document; byte-identical for identical inputs
        once the timings key is dropped."""
        if self.serialized is None:
            self.serialized = json.dumps(self.to_json(), sort_keys=True,
                                         separators=(",", ":"), ensure_ascii=False)
        return self.serialized
