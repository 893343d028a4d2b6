"""Instrumentation passes, applied in a fixed order by `instrument`.

Each pass mutates a cloned executable tree in place and returns it.
Individual passes are exposed for tests; `instrument` is the public entry.
"""

from __future__ import annotations

from typing import Optional

from ..annotations.attach import AttachedAnnotations
from ..annotations.model import CustomTemplate
from ..lang import ParseError, nodes as N, parse_expression_text, parse_statements_text
from ..lang.parser import IdentifiedAst
from ..lang.printer import to_source
from .config import InstrumentConfig
from .module import (Diagnostic, ExamplePlan, InstrumentedModule, ProbePlan,
                     ReplacementParseError, SliderPlan, UnknownClass,
                     UnresolvedImport, UnresolvedValueSpec, ValuePlan, parse_script)

SPLICEABLE = ("ExprStmt", "VarDecl", "Return")


def module_stem(path: str) -> str:
    name = path.rsplit("/", 1)[-1]
    if name.endswith(".baby"):
        name = name[:-len(".baby")]
    return name


# --- basic transformations ---------------------------------------------------

def normalize_blocks(root: N.Node) -> N.Node:
    """Wrap single-statement bodies in blocks; idempotent."""
    for node in list(root.walk()):
        if node.kind == "If":
            node.then = _ensure_block(node.then)
            if node.orelse is not None and node.orelse.kind != "If":
                node.orelse = _ensure_block(node.orelse)
        elif node.kind in ("While", "For"):
            node.body = _ensure_block(node.body)
    return root


def _ensure_block(stmt: N.Node) -> N.Node:
    if stmt.kind == "Block":
        return stmt
    block = N.Block(body=[stmt])
    block.span = stmt.span
    block.origin_id = stmt.origin_id
    return block


def rewrite_imports(root: N.Node, config: InstrumentConfig) -> N.Node:
    for node in root.walk():
        if node.kind != "ImportDecl":
            continue
        stem = module_stem(node.source)
        if stem in config.session_modules:
            node.mode = "session"
        else:
            if config.known_files is not None and stem not in config.known_files:
                raise UnresolvedImport(stem)
            node.mode = "file"
    return root


def insert_guards(root: N.Node, config: InstrumentConfig) -> N.Node:
    """Prepend a time-budget check to every block (and the module body);
    idempotent."""
    targets = [n for n in root.walk() if n.kind in ("Block", "Module")]
    for node in targets:
        if node.body and node.body[0].kind == "GuardCheck":
            continue
        guard = N.GuardCheck()
        guard.origin_id = node.origin_id
        guard.span = node.span
        node.body.insert(0, guard)
    return root


# --- annotation transforms ----------------------------------------------------

def apply_replacements(root: N.Node, attached: AttachedAnnotations,
                       diagnostics: list[Diagnostic]) -> N.Node:
    for rep in attached.replacements:
        source = rep.annotation.payload.replacement_source
        try:
            replacement = parse_expression_text(source)
        except ParseError as exc:
            raise ReplacementParseError(f"replacement {source!r} does not parse: {exc}")
        target, parent = _find_by_origin(root, rep.target_id)
        if target is None or parent is None:
            diagnostics.append(Diagnostic(
                "warning", f"replacement target {rep.target_id} no longer exists"))
            continue
        for sub in replacement.walk():
            sub.origin_id = rep.target_id
        replacement.span = target.span
        parent.replace_child(target, replacement)
    return root


def _find_by_origin(root: N.Node, origin_id: int):
    parents = _parent_map(root)
    for node in root.walk():
        if node.origin_id == origin_id:
            return node, parents.get(id(node))
    return None, None


def _parent_map(root: N.Node) -> dict[int, N.Node]:
    parents: dict[int, N.Node] = {}
    for node in root.walk():
        for child in node.children():
            parents[id(child)] = node
    return parents


def instrument_probes(root: N.Node, attached: AttachedAnnotations, ast: IdentifiedAst,
                      diagnostics: list[Diagnostic]) -> dict[str, ProbePlan]:
    table: dict[str, ProbePlan] = {}
    for probe in attached.probes:
        parents = _parent_map(root)
        target = None
        for node in root.walk():
            if node.origin_id == probe.target_id and node.id == probe.target_id:
                target = node
                break
        if target is None:
            diagnostics.append(Diagnostic(
                "warning",
                f"probe {probe.probe_id} target no longer exists (inside a replacement?)"))
            continue
        label = _probe_label(ast, probe.target_id)
        plan = _instrument_one_probe(probe.probe_id, target, parents, diagnostics, label)
        if plan is not None:
            table[probe.probe_id] = plan
    return table


def _probe_label(ast: IdentifiedAst, target_id: int) -> str:
    node = ast.node_by_id.get(target_id)
    if node is None:
        return f"#{target_id}"
    if node.kind == "Return":
        return "return"
    if node.kind == "Identifier":
        return node.name
    try:
        return to_source(node)
    except ValueError:
        return node.kind


def _instrument_one_probe(probe_id: str, target: N.Node, parents, diagnostics,
                          label: str) -> Optional[ProbePlan]:
    origin = target.origin_id

    if target.kind == "Return":
        target.probe_id = probe_id
        return ProbePlan(probe_id, origin, label, mode="return")

    parent = parents.get(id(target))

    if target.kind == "Identifier" and parent is not None \
            and parent.kind in ("FunctionDecl", "MethodDef", "FunctionExpr", "ArrowExpr") \
            and any(p is target for p in parent.params):
        body = parent.body
        if body is None or body.kind != "Block":
            diagnostics.append(Diagnostic(
                "warning", f"probe {probe_id}: cannot instrument parameter of expression-bodied arrow"))
            return None
        capture = _capture(probe_id, "after", _ident_expr(target), origin)
        body.body.insert(_entry_insert_index(body), capture)
        return ProbePlan(probe_id, origin, label, mode="parameter")

    if target.kind == "Identifier" and parent is not None and parent.kind == "VarDecl" \
            and parent.name is target:
        mode = "declarator"
        capture_expr = _ident_expr(target)
    elif target.kind == "Identifier" and parent is not None \
            and parent.kind in ("Assignment", "Update") and parent.target is target:
        mode = "assignment"
        capture_expr = _ident_expr(target)
    elif target.kind in ("Member", "Index"):
        mode = "member"
        capture_expr = N.clone(target)
    else:
        diagnostics.append(Diagnostic(
            "warning", f"probe {probe_id}: target is not in a trackable position"))
        return None

    found, crossed_header = _find_statement(target, parents)
    if found is None or crossed_header or found[0].kind not in SPLICEABLE:
        diagnostics.append(Diagnostic(
            "warning", f"probe {probe_id}: enclosing statement cannot carry captures"))
        return None
    stmt, container = found

    exits_scope = stmt.kind == "Return"
    index = _index_of(container.body, stmt)
    if mode != "declarator":
        container.body.insert(index, _capture(probe_id, "before", N.clone(capture_expr), origin))
        index += 1
    if not exits_scope:
        container.body.insert(index + 1, _capture(probe_id, "after", capture_expr, origin))
    elif mode == "declarator":
        diagnostics.append(Diagnostic(
            "warning", f"probe {probe_id}: declarator capture suppressed in scope-exiting statement"))
        return None
    return ProbePlan(probe_id, origin, label, mode=mode)


def _capture(probe_id: str, phase: str, expr: N.Node, origin: int) -> N.ProbeCapture:
    node = N.ProbeCapture(probe_id=probe_id, phase=phase, expr=expr)
    node.origin_id = origin
    node.span = expr.span
    return node


def _ident_expr(target: N.Node) -> N.Node:
    ident = N.Identifier(name=target.name)
    ident.origin_id = target.origin_id
    ident.span = target.span
    return ident


def _find_statement(target: N.Node, parents) -> tuple[Optional[tuple[N.Node, N.Node]], bool]:
    cur = target
    crossed_header = False
    while True:
        parent = parents.get(id(cur))
        if parent is None:
            return None, crossed_header
        if parent.kind in ("Block", "Module"):
            return (cur, parent), crossed_header
        if parent.kind == "If" and cur is parent.test:
            crossed_header = True
        elif parent.kind == "While" and cur is parent.test:
            crossed_header = True
        elif parent.kind == "For" and (cur is parent.test or cur is parent.update
                                       or cur is parent.init):
            crossed_header = True
        cur = parent


def _index_of(body: list, stmt: N.Node) -> int:
    for i, node in enumerate(body):
        if node is stmt:
            return i
    raise ValueError("statement not in its container")


def _entry_insert_index(block: N.Block) -> int:
    """Skip a leading guard and counter so entry captures follow them."""
    i = 0
    while i < len(block.body) and block.body[i].kind in ("GuardCheck", "CounterBump"):
        i += 1
    return i


def instrument_sliders(root: N.Node, attached: AttachedAnnotations, ast: IdentifiedAst,
                       diagnostics: list[Diagnostic]) -> dict[str, SliderPlan]:
    table: dict[str, SliderPlan] = {}
    for slider in attached.sliders:
        parents = _parent_map(root)
        target = None
        for node in root.walk():
            if node.origin_id == slider.target_id and node.id == slider.target_id:
                target = node
                break
        if target is None:
            diagnostics.append(Diagnostic(
                "warning", f"slider {slider.slider_id} target no longer exists"))
            continue
        body, label = _slider_body(target, parents)
        if body is None:
            diagnostics.append(Diagnostic(
                "warning", f"slider {slider.slider_id}: target has no countable body"))
            continue
        bump = N.CounterBump(slider_id=slider.slider_id)
        bump.origin_id = slider.target_id
        bump.span = target.span
        index = 1 if body.body and body.body[0].kind == "GuardCheck" else 0
        body.body.insert(index, bump)
        table[slider.slider_id] = SliderPlan(slider.slider_id, slider.target_id, label)
    return table


def _slider_body(target: N.Node, parents) -> tuple[Optional[N.Block], str]:
    if target.kind in ("While", "For"):
        body = target.body if target.body is not None and target.body.kind == "Block" else None
        return body, target.kind.lower()
    if target.kind == "Identifier":
        parent = parents.get(id(target))
        if parent is None:
            return None, target.name
        if parent.kind in ("FunctionDecl", "MethodDef") and parent.name is target:
            return parent.body, target.name
        if parent.kind == "ObjectLit":
            for key, value in zip(parent.keys, parent.values):
                if key is target and value.kind in ("FunctionExpr", "ArrowExpr"):
                    if value.body is not None and value.body.kind == "Block":
                        return value.body, target.name
    return None, getattr(target, "name", target.kind)


def emit_factories(root: N.Module, attached: AttachedAnnotations,
                   custom_templates: list[CustomTemplate], config: InstrumentConfig,
                   diagnostics: list[Diagnostic]) -> None:
    declared_classes = {
        node.name.name for node in root.walk() if node.kind == "ClassDecl"
    }
    for template in attached.instance_templates:
        payload = template.annotation.payload
        if template.class_name not in declared_classes:
            raise UnknownClass(f"instance template {payload.name!r} names missing class "
                               f"{template.class_name!r}")
        factory = N.FactoryDecl(
            name=payload.name, factory_kind="ctor", class_name=template.class_name,
            arg_plans=[ValuePlan.from_spec(spec) for spec in payload.ctor_args])
        factory.origin_id = template.target_id
        root.body.append(factory)
    for custom in custom_templates:
        body = parse_statements_text(custom.body)
        wrapper = N.Block(body=body)
        wrapper.origin_id = root.origin_id
        normalize_blocks(wrapper)
        _set_missing_origins(wrapper, root.origin_id)
        insert_guards(wrapper, config)
        factory = N.FactoryDecl(name=custom.name, factory_kind="custom",
                                body=wrapper.body)
        factory.origin_id = root.origin_id
        root.body.append(factory)


def append_example_blocks(root: N.Module, attached: AttachedAnnotations,
                          config: InstrumentConfig,
                          diagnostics: list[Diagnostic]) -> list[ExamplePlan]:
    table: list[ExamplePlan] = []
    for example in attached.examples:
        payload = example.payload
        plan = ExamplePlan(
            example_id=example.example_id,
            name=payload.name,
            color_index=payload.color_index,
            enabled=payload.enabled,
            target_kind=example.target_kind,
            function_name=example.function_name,
            class_name=example.class_name,
            is_static=example.is_static,
            param_names=example.param_names,
            this_plan=_checked_plan(payload.this_binding, config),
            param_plans=[_checked_plan(payload.params[name], config)
                         for name in example.param_names],
            prescript=_guarded_script(payload.prescript, config, example.target_id),
            postscript=_guarded_script(payload.postscript, config, example.target_id),
            target_origin_id=example.target_id,
        )
        table.append(plan)
        if plan.enabled:
            block = N.ExampleBlock(plan=plan)
            block.origin_id = example.target_id
            root.body.append(block)
    return table


def _checked_plan(spec, config: InstrumentConfig) -> ValuePlan:
    plan = ValuePlan.from_spec(spec)
    if plan.variant == "template_ref" and plan.text not in config.template_names \
            and plan.text not in config.custom_template_names:
        raise UnresolvedValueSpec(plan.text, "template")
    if plan.variant == "custom_ref" and plan.text not in config.custom_template_names:
        raise UnresolvedValueSpec(plan.text, "custom template")
    if plan.variant == "resource_ref" and plan.text not in config.resource_names:
        raise UnresolvedValueSpec(plan.text, "resource")
    return plan


def _guarded_script(text, config: InstrumentConfig, origin: int) -> list[N.Node]:
    stmts = parse_script(text)
    if not stmts:
        return []
    wrapper = N.Block(body=stmts)
    wrapper.origin_id = origin
    normalize_blocks(wrapper)
    _set_missing_origins(wrapper, origin)
    insert_guards(wrapper, config)
    return wrapper.body


def _set_missing_origins(root: N.Node, origin: int) -> None:
    for node in root.walk():
        if node.kind in ("Block",) and node.origin_id < 0:
            node.origin_id = origin


def instrument(ast: IdentifiedAst, attached: AttachedAnnotations,
               config: InstrumentConfig,
               custom_templates: Optional[list[CustomTemplate]] = None) -> InstrumentedModule:
    """Run every pass in order:

    normalize_blocks -> rewrite_imports -> insert_guards -> apply_replacements
    -> instrument_probes -> instrument_sliders -> emit_factories
    -> append_example_blocks
    """
    custom_templates = custom_templates or []
    diagnostics: list[Diagnostic] = []
    root = N.clone(ast.root)
    normalize_blocks(root)
    rewrite_imports(root, config)
    insert_guards(root, config)
    apply_replacements(root, attached, diagnostics)
    probe_table = instrument_probes(root, attached, ast, diagnostics)
    slider_table = instrument_sliders(root, attached, ast, diagnostics)
    emit_factories(root, attached, custom_templates, config, diagnostics)
    example_table = append_example_blocks(root, attached, config, diagnostics)
    return InstrumentedModule(
        module_name=ast.module_name, exec_tree=root,
        probe_table=probe_table, slider_table=slider_table,
        example_table=example_table, diagnostics=diagnostics)
