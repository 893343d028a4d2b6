from __future__ import annotations

from pathlib import Path

import pytest

from babylang.session import Session, fixtures_dir


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return fixtures_dir()


def load_fixture(name: str) -> str:
    return (fixtures_dir() / f"{name}.baby").read_text(encoding="utf-8")


def make_session(*modules: str, budget_ms: float = 500.0, depth: int = 3,
                 resources: dict | None = None) -> Session:
    from babylang.instrument import InstrumentConfig

    session = Session(config=InstrumentConfig(time_budget_ms=budget_ms,
                                              snapshot_depth=depth),
                      root_dir=fixtures_dir())
    session.load_templates((fixtures_dir() / "templates.babytpl").read_text(encoding="utf-8"))
    for module in modules:
        session.open_file(fixtures_dir() / f"{module}.baby")
    for name, value in (resources or {}).items():
        session.set_resource(name, value)
    return session


# Every shipped fixture that evaluates cleanly on its own, with the session
# modules each needs. infinite is excluded where wall time matters.
FIXTURE_SESSIONS: dict[str, tuple[str, ...]] = {
    "simple": ("simple", "person"),
    "person": ("person",),
    "search_steps": ("search_steps",),
    "recursive": ("recursive",),
    "temperature": ("temperature",),
    "errors": ("errors",),
    "locmap": ("locconv", "locmap"),
    "powers": ("powers",),
    "nested": ("nested",),
    "prescript": ("prescript",),
    "throwfix": ("throwfix",),
    "cycle": ("cycle_a", "cycle_b"),
    "diamond": ("diamond_a", "diamond_b", "diamond_c", "diamond_d"),
    "complex": ("complex", "complex_util"),
}

ALL_FIXTURE_FILES = [
    "simple", "person", "search_steps", "recursive", "temperature", "errors",
    "locconv", "locmap", "infinite", "powers", "nested", "prescript",
    "throwfix", "cycle_a", "cycle_b", "diamond_a", "diamond_b", "diamond_c",
    "diamond_d", "canvas", "complex", "complex_util", "empty",
]
