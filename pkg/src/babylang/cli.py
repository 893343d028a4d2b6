"""Command-line front door: headless runs, benchmarks, and the wire service.

Exit codes for `run`: 0 all enabled examples ok, 1 some example errored or
timed out, 2 parse/attach/instrument or filesystem failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .instrument import InstrumentConfig
from .lang import parse_expression_text
from .render import render_module
from .runtime import CanvasMock, Evaluation
from .session import (SCENARIOS, Session, bench, fixtures_dir, format_bench_table,
                      run_with_deep_stack)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="babylang",
                                     description="Example-based live programming engine")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate .baby files once and print the report")
    run.add_argument("paths", nargs="+", help=".baby files to open in the session")
    run.add_argument("--templates", help="custom template sidecar (.babytpl)")
    run.add_argument("--resources", help="JSON file binding resource names")
    run.add_argument("--budget-ms", type=float, default=500.0,
                     help="per-example time budget (default 500)")
    run.add_argument("--depth", type=int, default=3,
                     help="snapshot depth (default 3)")
    run.add_argument("--format", choices=("annotated", "structured"),
                     default="annotated")

    bench_cmd = sub.add_parser("bench", help="run a response-time scenario")
    bench_cmd.add_argument("scenario", choices=sorted(SCENARIOS) + ["all"])
    bench_cmd.add_argument("reps", type=int, nargs="?", default=100)
    bench_cmd.add_argument("interval_ms", type=float, nargs="?", default=0.0)
    bench_cmd.add_argument("--format", choices=("table", "json"), default="table")

    serve = sub.add_parser("serve", help="serve the editor wire protocol")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8765)
    serve.add_argument("--root", help="directory for plain module loads")
    return parser


def load_resources(path: Path, config: InstrumentConfig) -> dict:
    """Resource file: {"name": {"mock": "canvas"} | {"expr": "<expression>"}}."""
    spec = json.loads(path.read_text(encoding="utf-8"))
    evaluator = Evaluation({}, config)
    resources = {}
    for name, binding in spec.items():
        if not isinstance(binding, dict):
            raise ValueError(f"resource {name!r}: binding must be an object")
        if "mock" in binding:
            if binding["mock"] != "canvas":
                raise ValueError(f"resource {name!r}: unknown mock {binding['mock']!r}")
            resources[name] = CanvasMock(name)
        elif "expr" in binding:
            expr = parse_expression_text(binding["expr"])
            resources[name] = evaluator.eval_expr(expr, evaluator.builtins_env)
        else:
            raise ValueError(f"resource {name!r}: needs 'mock' or 'expr'")
    return resources


def cmd_run(args) -> int:
    paths = [Path(p) for p in args.paths]
    for path in paths:
        if not path.is_file():
            print(f"error: no such file: {path}", file=sys.stderr)
            return 2
    try:
        config = InstrumentConfig(time_budget_ms=args.budget_ms, snapshot_depth=args.depth)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    session = Session(config=config, root_dir=paths[0].parent)

    templates = Path(args.templates) if args.templates else paths[0].parent / "templates.babytpl"
    if templates.is_file():
        try:
            session.load_templates(templates.read_text(encoding="utf-8"))
        except Exception as exc:
            print(f"error: templates: {exc}", file=sys.stderr)
            return 2

    if args.resources:
        try:
            for name, value in load_resources(Path(args.resources), config).items():
                session.set_resource(name, value)
        except Exception as exc:
            print(f"error: resources: {exc}", file=sys.stderr)
            return 2

    for path in paths:
        session.open_file(path)

    report = run_with_deep_stack(session.evaluate_all)

    if args.format == "structured":
        print(report.serialize())
    else:
        for name, section in report.modules.items():
            print(f"{name}:")
            print(render_module(section, report))

    broken = False
    for section in report.modules.values():
        for diag in section.diagnostics:
            if diag.get("severity") == "error":
                broken = True
    if report.diagnostics:
        broken = True
    if broken:
        return 2
    for section in report.modules.values():
        for row in section.examples:
            if row["enabled"] and row.get("status") not in (None, "ok"):
                return 1
    return 0


def cmd_bench(args) -> int:
    scenarios = sorted(SCENARIOS) if args.scenario == "all" else [args.scenario]
    results = []
    for scenario in scenarios:
        results.append(run_with_deep_stack(
            bench, scenario, args.reps, args.interval_ms))
    if args.format == "json":
        print(json.dumps([r.to_json() for r in results], indent=2, sort_keys=True))
    else:
        print(format_bench_table(results))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    root = Path(args.root) if args.root else fixtures_dir()
    app = create_app(root_dir=root)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    if args.command == "bench":
        return cmd_bench(args)
    if args.command == "serve":
        return cmd_serve(args)
    return 2


if __name__ == "__main__":
    sys.exit(main())
