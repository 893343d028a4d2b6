from .engine import ModuleEntry, Session
from .report import EvaluationReport, ModuleSection, PhaseTimings
from .fading import compute_faded_lines, executable_lines, lines_for_nodes
from .scheduler import LiveSession
from .worker import run_with_deep_stack
from .bench import (SCENARIOS, BenchResult, bench, bench_session,
                    build_scenario_session, fixtures_dir, format_bench_table)

__all__ = [
    "ModuleEntry", "Session", "EvaluationReport", "ModuleSection", "PhaseTimings",
    "compute_faded_lines", "executable_lines", "lines_for_nodes",
    "LiveSession", "run_with_deep_stack", "SCENARIOS", "BenchResult", "bench",
    "bench_session", "build_scenario_session", "fixtures_dir", "format_bench_table",
]
