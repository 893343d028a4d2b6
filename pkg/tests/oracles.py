"""Independent oracles: everything here avoids the instrumentation passes.

The clean route loads plain (untransformed) module trees, materializes
example arguments by hand, and calls the target functions directly. The
instrumented route must agree with it observably.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

from babylang.annotations import attach, extract_annotations, parse_sidecar
from babylang.instrument import InstrumentConfig, module_stem
from babylang.instrument.module import ValuePlan
from babylang.lang import parse_module, parse_statements_text
from babylang.runtime import BabyError, BabyTimeout, Evaluation, ReturnSignal
from babylang.runtime.interpreter import Environment, ExampleState
from babylang.runtime.snapshots import snapshot
from babylang.runtime.tracing import ExampleOutcome
from babylang.session import fixtures_dir, run_with_deep_stack


@dataclass
class CleanResult:
    example_id: str
    name: str
    status: str
    error_message: str | None
    return_json: dict | None
    output: list[str]
    executed_node_ids: set[tuple[str, int]] = field(default_factory=set)


def clean_run(modules: list[str], root: Path | None = None,
              budget_ms: float = 500.0, depth: int = 3,
              resources: dict | None = None) -> tuple[list[CleanResult], dict]:
    """Evaluate every enabled example of the given session modules on plain
    trees, dependency order, direct invocation. Returns per-example results
    and per-module load coverage."""
    return run_with_deep_stack(_clean_run_impl, modules, root, budget_ms, depth, resources)


def _clean_run_impl(modules, root, budget_ms, depth, resources):
    root = root or fixtures_dir()
    sources = {m: (root / f"{m}.baby").read_text(encoding="utf-8") for m in modules}
    config = InstrumentConfig(time_budget_ms=budget_ms, snapshot_depth=depth)
    customs = {t.name: t for t in parse_sidecar((root / "templates.babytpl").read_text())}

    parsed = {}
    attached = {}
    for name, source in sources.items():
        ast = parse_module(source, name)
        parsed[name] = ast
        attached[name] = attach(extract_annotations(source).annotations, ast)

    def plain_loader(name: str):
        if name in sources:
            return sources[name]
        candidate = root / f"{name}.baby"
        return candidate.read_text(encoding="utf-8") if candidate.exists() else None

    ev = Evaluation({}, config, plain_loader=plain_loader, resources=resources or {})

    def order_for(modules: list[str]) -> list[str]:
        # dependencies first, alphabetical ties, like the engine
        edges = {}
        for name in modules:
            deps = set()
            for node in parsed[name].preorder:
                if node.kind == "ImportDecl":
                    dep = module_stem(node.source)
                    if dep in sources:
                        deps.add(dep)
            edges[name] = deps
        out, remaining = [], dict(edges)
        while remaining:
            ready = sorted(n for n, d in remaining.items() if not d) or [min(remaining)]
            for n in ready:
                out.append(n)
                del remaining[n]
            for d in remaining.values():
                d.difference_update(ready)
        return out

    results: list[CleanResult] = []
    for name in order_for(list(sources)):
        try:
            instance = ev.load_module(name)
        except BabyError as exc:
            for ex in attached[name].enabled_examples():
                results.append(CleanResult(ex.example_id, ex.name, "error", str(exc),
                                           None, []))
            continue
        for ex in attached[name].enabled_examples():
            results.append(_run_example(ev, instance, ex, attached, customs, config))
    return results, dict(ev.load_coverage)


def _run_example(ev: Evaluation, instance, ex, attached_by_module, customs, config):
    payload = ex.payload
    outcome = ExampleOutcome(example_id=ex.example_id, name=ex.name,
                             color_index=payload.color_index)
    ev.current_example = ExampleState(ex.example_id, outcome)
    saved = ev.deadline
    ev.deadline = time.perf_counter() + config.time_budget_ms / 1000.0
    status, message, return_json = "ok", None, None
    try:
        this_value = _materialize(ev, instance, payload.this_binding, attached_by_module, customs)
        scope = Environment(instance.env, function_boundary=True)
        for pname in ex.param_names:
            scope.define(pname, _materialize(ev, instance, payload.params[pname],
                                             attached_by_module, customs))
        for stmt in _script(payload.prescript):
            ev.exec_stmt(stmt, scope)
        args = [scope.lookup(p) for p in ex.param_names]
        value = _invoke(ev, instance, ex, this_value, args)
        return_json = snapshot(value, config.snapshot_depth).to_json()
        for stmt in _script(payload.postscript):
            ev.exec_stmt(stmt, scope)
    except BabyTimeout:
        status, message = "timeout", "example exceeded its time budget"
    except BabyError as exc:
        status, message = "error", str(exc)
    except ReturnSignal:
        status, message = "error", "illegal return in example script"
    finally:
        executed = set(outcome.executed_node_ids)
        ev.deadline = saved
        ev.current_example = None
    return CleanResult(ex.example_id, ex.name, status, message, return_json,
                       list(outcome.output), executed)


def _script(text):
    return parse_statements_text(text) if text else []


def _invoke(ev: Evaluation, instance, ex, this_value, args):
    from babylang.runtime import values as V

    if ex.target_kind == "function":
        fn = instance.env.lookup(ex.function_name)
        return ev.invoke(fn, this_value, args)
    cls = instance.env.lookup(ex.class_name)
    if ex.is_static:
        fn = cls.static_methods.get(ex.function_name)
        if fn is None:
            raise V.BabyRuntimeError(f"{ex.class_name} has no static method {ex.function_name}")
        return ev.invoke(fn, cls, args)
    fn = cls.methods.get(ex.function_name)
    if fn is None:
        raise V.BabyRuntimeError(f"{ex.class_name} has no method {ex.function_name}")
    return ev.invoke(fn, this_value, args)


def _materialize(ev: Evaluation, instance, spec, attached_by_module, customs):
    from babylang.runtime import values as V

    plan = ValuePlan.from_spec(spec)
    if plan.variant == "literal_source":
        return ev.eval_expr(plan.expr, Environment(instance.env))
    if plan.variant == "resource_ref":
        return ev.resources[plan.text]
    # template or custom reference
    if plan.variant == "template_ref":
        for module_attached in attached_by_module.values():
            for template in module_attached.instance_templates:
                if template.annotation.payload.name == plan.text:
                    owner = ev.module_cache[module_attached.module_name]
                    cls = owner.env.lookup(template.class_name)
                    args = [_materialize(ev, owner, s, attached_by_module, customs)
                            for s in template.annotation.payload.ctor_args]
                    return ev.instantiate(cls, args)
    custom = customs.get(plan.text)
    if custom is None:
        raise V.BabyRuntimeError(f"unknown template {plan.text!r}")
    stmts = parse_statements_text(custom.body)
    env = Environment(instance.env, function_boundary=True)
    for stmt in stmts[:-1]:
        ev.exec_stmt(stmt, env)
    return ev.eval_expr(stmts[-1].value, env)


# --- structural oracles -------------------------------------------------------


def preorder_types(tree: dict) -> list[str]:
    """Pre-order walk over the template object trees used by the locmap and
    errors fixtures (dicts with type/children)."""
    out = [tree["type"]]
    for child in tree.get("children", []):
        out.extend(preorder_types(child))
    return out


def preorder_keys(tree: dict) -> list[list[int]]:
    keys = []
    loc = tree.get("loc")
    if loc is not None:
        keys.append([loc["start"]["line"], loc["start"]["column"],
                     loc["end"]["line"], loc["end"]["column"]])
    for child in tree.get("children", []):
        keys.extend(preorder_keys(child))
    return keys


def binary_search_trace(key: str, array: list[str]):
    """Plain step-by-step binary search matching search_steps.baby."""
    low, high = 0, len(array) - 1
    steps = []
    while low <= high:
        mid = (low + high) >> 1
        value = array[mid]
        if value == key:
            steps.append({"mid": mid, "value": value, "returned": mid})
            return mid, steps
        new_low = mid + 1 if value < key else low
        new_high = mid - 1 if value > key else high
        steps.append({"mid": mid, "value": value,
                      "low_before": low, "low_after": new_low,
                      "high_before": high, "high_after": new_high})
        low, high = new_low, new_high
    return -1, steps


def recursive_search_activations(key: str, array: list[str]):
    """Activation count and result for the recursive fixture."""
    calls = []

    def search(low, high):
        calls.append((low, high))
        if low > high:
            return -1
        mid = (low + high) >> 1
        value = array[mid]
        if value < key:
            return search(mid + 1, high)
        if value > key:
            return search(low, mid - 1)
        return mid

    result = search(0, len(array) - 1)
    return result, calls


def normalize_snapshot_ids(doc):
    """Rename identity ids densely in first-encounter order; ids are per-run
    labels, so comparisons across runs must be invariant to a consistent
    relabeling."""
    mapping: dict[int, int] = {}

    def walk(node):
        if isinstance(node, dict):
            out = {}
            for key, value in node.items():
                if key == "id" and isinstance(value, int):
                    out[key] = mapping.setdefault(value, len(mapping) + 1)
                else:
                    out[key] = walk(value)
            return out
        if isinstance(node, list):
            return [walk(item) for item in node]
        return node

    return walk(doc)
