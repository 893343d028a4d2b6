"""Response-time benchmark: fires synthetic change events and reports
median +- stddev per phase, split into adaptation (parse+transform) and
emergence (execute+update)."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..instrument import InstrumentConfig
from .engine import Session
from .report import PhaseTimings

PHASES = ("parse", "transform", "execute", "update")

# scenario name -> modules opened in editors; imports of unopened modules
# load as plain files from the fixture directory.
SCENARIOS: dict[str, list[str]] = {
    "baseline": ["empty"],
    "simple": ["simple"],
    "simple_two_editors": ["simple", "person"],
    "complex": ["complex"],
    "complex_two_editors": ["complex", "complex_util"],
}


def fixtures_dir() -> Path:
    return Path(__file__).resolve().parent.parent / "fixtures"


def build_scenario_session(name: str, root: Optional[Path] = None,
                           config: Optional[InstrumentConfig] = None) -> Session:
    if name not in SCENARIOS:
        raise KeyError(f"unknown scenario {name!r}")
    root = root or fixtures_dir()
    session = Session(config=config, root_dir=root)
    templates = root / "templates.babytpl"
    if templates.exists():
        session.load_templates(templates.read_text(encoding="utf-8"))
    for module in SCENARIOS[name]:
        session.open_file(root / f"{module}.baby")
    return session


@dataclass
class PhaseStats:
    phase: str
    median_ms: float
    stddev_ms: float
    samples: list[float] = field(default_factory=list)


@dataclass
class BenchResult:
    scenario: str
    repetitions: int
    interval_ms: float
    phases: dict[str, PhaseStats] = field(default_factory=dict)

    @property
    def adaptation_median_ms(self) -> float:
        return self.phases["parse"].median_ms + self.phases["transform"].median_ms

    @property
    def emergence_median_ms(self) -> float:
        return self.phases["execute"].median_ms + self.phases["update"].median_ms

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "repetitions": self.repetitions,
            "interval_ms": self.interval_ms,
            "phases": {name: {"median_ms": s.median_ms, "stddev_ms": s.stddev_ms}
                       for name, s in self.phases.items()},
            "adaptation_median_ms": self.adaptation_median_ms,
            "emergence_median_ms": self.emergence_median_ms,
        }


def bench_session(session: Session, repetitions: int, interval_ms: float = 0.0,
                  scenario: str = "custom") -> BenchResult:
    """Fire a change event per repetition (all modules dirty, full reparse),
    evaluate, and collect the four phase durations."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    samples: dict[str, list[float]] = {phase: [] for phase in PHASES}
    for i in range(repetitions):
        for entry in session.modules.values():
            entry.dirty = True
        report = session.evaluate_all()
        timings: PhaseTimings = report.timings
        samples["parse"].append(timings.parse_ms)
        samples["transform"].append(timings.transform_ms)
        samples["execute"].append(timings.execute_ms)
        samples["update"].append(timings.update_ms)
        if interval_ms > 0 and i + 1 < repetitions:
            time.sleep(interval_ms / 1000.0)
    result = BenchResult(scenario=scenario, repetitions=repetitions, interval_ms=interval_ms)
    for phase in PHASES:
        data = samples[phase]
        result.phases[phase] = PhaseStats(
            phase=phase,
            median_ms=statistics.median(data),
            stddev_ms=statistics.stdev(data) if len(data) > 1 else 0.0,
            samples=data,
        )
    return result


def bench(scenario: str, repetitions: int, interval_ms: float = 0.0,
          root: Optional[Path] = None,
          config: Optional[InstrumentConfig] = None) -> BenchResult:
    session = build_scenario_session(scenario, root=root, config=config)
    return bench_session(session, repetitions, interval_ms, scenario=scenario)


def format_bench_table(results: list[BenchResult]) -> str:
    """Table mirroring the four-phase split; adaptation = parse+transform
    (off the UI thread), emergence = execute+update (report assembly and
    serialization stand in for editor DOM work)."""
    lines = []
    header = (f"{'scenario':<22} " +
              " ".join(f"{phase:>19}" for phase in PHASES) +
              f" {'adaptation':>12} {'emergence':>12}")
    lines.append(header)
    lines.append("-" * len(header))
    for result in results:
        cells = []
        for phase in PHASES:
            s = result.phases[phase]
            cells.append(f"{s.median_ms:9.2f} ± {s.stddev_ms:7.2f}")
        lines.append(f"{result.scenario:<22} " + " ".join(cells) +
                     f" {result.adaptation_median_ms:12.2f} {result.emergence_median_ms:12.2f}")
    lines.append("(medians ± stddev in ms; update = report assembly + serialization)")
    return "\n".join(lines)
