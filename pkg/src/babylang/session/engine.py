"""The central worker: owns the multi-module session and runs the
parse -> transform -> execute -> update cycle."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

from ..annotations import (AttachedAnnotations, ExtractResult, attach,
                           extract_annotations, parse_sidecar)
from ..annotations.model import CustomTemplate
from ..instrument import (InstrumentConfig, InstrumentError, InstrumentedModule,
                          instrument, module_stem)
from ..lang import ParseError, parse_module
from ..lang.locations import build_location_map, keyword_span
from ..lang.parser import IdentifiedAst
from ..lang.spans import location_key
from ..annotations.eligibility import PREDICATES
from ..runtime import Evaluation, query_probe
from ..runtime.tracing import TraceStore
from .fading import compute_faded_lines, executable_lines, lines_for_nodes
from .worker import run_with_deep_stack
from .report import EvaluationReport, ModuleSection, PhaseTimings


@dataclass
class ModuleEntry:
    name: str
    source: str
    dirty: bool = True
    ast: Optional[IdentifiedAst] = None
    extracted: Optional[ExtractResult] = None
    attached: Optional[AttachedAnnotations] = None
    parse_error: Optional[ParseError] = None
    last_section: Optional[ModuleSection] = None


class Session:
    """Synchronous session engine; one evaluation at a time."""

    def __init__(self, config: Optional[InstrumentConfig] = None,
                 root_dir: Optional[Path] = None):
        self.config = config or InstrumentConfig()
        self.root_dir = Path(root_dir) if root_dir else None
        self.modules: dict[str, ModuleEntry] = {}
        self.custom_templates: list[CustomTemplate] = []
        self.resources: dict[str, Any] = {}
        self.revision = 0
        self.subscribers: list[Callable[[EvaluationReport], None]] = []
        self.current_phase: Optional[str] = None
        self.last_report: Optional[EvaluationReport] = None
        self.last_evaluation: Optional[Evaluation] = None

    # -- session mutation --

    def open_module(self, name: str, source: str) -> None:
        if name in self.modules:
            self.update_source(name, source)
            return
        self.modules[name] = ModuleEntry(name=name, source=source)

    def open_file(self, path: Path) -> str:
        path = Path(path)
        name = module_stem(path.name)
        self.open_module(name, path.read_text(encoding="utf-8"))
        return name

    def close_module(self, name: str) -> None:
        self.modules.pop(name, None)

    def update_source(self, name: str, source: str) -> int:
        """Store new text; returns the revision the next evaluation will carry."""
        entry = self.modules.get(name)
        if entry is None:
            self.modules[name] = ModuleEntry(name=name, source=source)
        else:
            entry.source = source
            entry.dirty = True
        return self.revision + 1

    def load_templates(self, sidecar_text: str) -> None:
        self.custom_templates = parse_sidecar(sidecar_text)

    def set_resource(self, name: str, value: Any) -> None:
        self.resources[name] = value

    def subscribe(self, callback: Callable[[EvaluationReport], None]) -> None:
        self.subscribers.append(callback)

    # -- the four-phase cycle --

    def evaluate_all(self) -> EvaluationReport:
        """Run the four-phase cycle on the deep-stack worker (interpreter
        recursion needs more than a default host stack)."""
        return run_with_deep_stack(self._evaluate_all_impl)

    def _evaluate_all_impl(self) -> EvaluationReport:
        timings = PhaseTimings()
        session_diags: list[dict] = []

        t0 = time.perf_counter()
        self.current_phase = "parse"
        for entry in self.modules.values():
            if entry.dirty:
                self._parse_entry(entry)
        timings.parse_ms = (time.perf_counter() - t0) * 1000.0

        t0 = time.perf_counter()
        self.current_phase = "transform"
        config = self._effective_config()
        scope = self._transform_scope()
        registry: dict[str, InstrumentedModule] = {}
        broken: dict[str, str] = {}
        for name in scope:
            entry = self.modules[name]
            if entry.ast is None or entry.attached is None:
                broken[name] = str(entry.parse_error or "module never parsed")
                continue
            try:
                registry[name] = instrument(entry.ast, entry.attached, config,
                                            self.custom_templates)
            except InstrumentError as exc:
                broken[name] = str(exc)
        timings.transform_ms = (time.perf_counter() - t0) * 1000.0

        t0 = time.perf_counter()
        self.current_phase = "execute"
        order = [name for name in self._execution_order(scope) if name in registry]
        evaluation = Evaluation(registry, config,
                                plain_loader=self._plain_loader,
                                resources=self.resources)
        evaluation.run_modules(order)
        self.last_evaluation = evaluation
        timings.execute_ms = (time.perf_counter() - t0) * 1000.0

        t0 = time.perf_counter()
        self.current_phase = "update"
        self.revision += 1
        report = EvaluationReport(revision=self.revision, timings=timings,
                                  diagnostics=session_diags,
                                  any_example_enabled=self._any_enabled())
        for name, entry in self.modules.items():
            report.modules[name] = self._module_section(entry, registry.get(name),
                                                        broken.get(name), evaluation)
        for name, reason in broken.items():
            session_diags.append({"severity": "error", "module": name, "message": reason})
        report.serialize()
        timings.update_ms = (time.perf_counter() - t0) * 1000.0
        self.current_phase = None

        self.last_report = report
        for subscriber in list(self.subscribers):
            subscriber(report)
        return report

    # -- helpers --

    def _parse_entry(self, entry: ModuleEntry) -> None:
        try:
            ast = parse_module(entry.source, entry.name)
        except ParseError as exc:
            entry.parse_error = exc
            entry.dirty = False
            return
        entry.ast = ast
        entry.parse_error = None
        entry.extracted = extract_annotations(entry.source)
        entry.attached = attach(entry.extracted.annotations, ast)
        entry.dirty = False

    def _effective_config(self) -> InstrumentConfig:
        template_names = set()
        for entry in self.modules.values():
            if entry.attached is not None:
                template_names |= {t.annotation.payload.name
                                   for t in entry.attached.instance_templates}
        return InstrumentConfig(
            time_budget_ms=self.config.time_budget_ms,
            snapshot_depth=self.config.snapshot_depth,
            session_modules=set(self.modules.keys()),
            known_files=self._known_files(),
            template_names=template_names,
            custom_template_names={t.name for t in self.custom_templates},
            resource_names=set(self.resources.keys()),
        )

    def _known_files(self) -> Optional[set[str]]:
        if self.root_dir is None:
            return set(self.modules.keys())
        names = {module_stem(p.name) for p in self.root_dir.glob("*.baby")}
        return names | set(self.modules.keys())

    def _plain_loader(self, name: str) -> Optional[str]:
        entry = self.modules.get(name)
        if entry is not None:
            return entry.source
        if self.root_dir is not None:
            candidate = self.root_dir / f"{name}.baby"
            if candidate.exists():
                return candidate.read_text(encoding="utf-8")
        return None

    def _any_enabled(self) -> bool:
        return any(entry.attached is not None and entry.attached.enabled_examples()
                   for entry in self.modules.values())

    def _import_edges(self) -> dict[str, set[str]]:
        edges: dict[str, set[str]] = {name: set() for name in self.modules}
        for name, entry in self.modules.items():
            if entry.ast is None:
                continue
            for node in entry.ast.preorder:
                if node.kind == "ImportDecl":
                    dep = module_stem(node.source)
                    if dep in self.modules:
                        edges[name].add(dep)
        return edges

    def _transform_scope(self) -> list[str]:
        """Modules with enabled examples plus everything they can reach."""
        edges = self._import_edges()
        roots = [name for name, entry in self.modules.items()
                 if entry.attached is not None and entry.attached.enabled_examples()]
        scope: set[str] = set()
        stack = list(roots)
        while stack:
            name = stack.pop()
            if name in scope:
                continue
            scope.add(name)
            stack.extend(edges.get(name, ()))
        return [name for name in self.modules if name in scope]

    def _execution_order(self, scope: list[str]) -> list[str]:
        """Topological by import edges (dependencies first), alphabetical ties;
        cycle members fall back to name order."""
        edges = self._import_edges()
        in_scope = set(scope)
        remaining = {name: {d for d in edges[name] if d in in_scope} for name in scope}
        order: list[str] = []
        while remaining:
            ready = sorted(name for name, deps in remaining.items() if not deps)
            if not ready:
                ready = [min(remaining)]  # cycle: break it alphabetically
            for name in ready:
                order.append(name)
                del remaining[name]
            for deps in remaining.values():
                deps.difference_update(ready)
        return order

    # -- report assembly --

    def _module_section(self, entry: ModuleEntry, mod: Optional[InstrumentedModule],
                        broken_reason: Optional[str],
                        evaluation: Evaluation) -> ModuleSection:
        name = entry.name
        if entry.parse_error is not None or (broken_reason is not None
                                             and entry.ast is None):
            section = self._stale_section(entry, broken_reason)
            entry.last_section = section
            return section

        section = ModuleSection(name=name, source=entry.source)
        ast = entry.ast
        if ast is None:
            section.stale = True
            return section

        if broken_reason is not None:
            section = self._stale_section(entry, broken_reason)
            entry.last_section = section
            return section

        for err in entry.extracted.errors if entry.extracted else []:
            section.diagnostics.append(
                {"severity": "error", "message": str(err), "kind": "annotation"})
        if entry.attached is not None:
            for err in entry.attached.errors:
                section.diagnostics.append(
                    {"severity": "error", "message": err.reason, "kind": "attach"})

        outcomes = {o.example_id: o for o in evaluation.outcomes}
        tracer = evaluation.tracer

        if mod is not None:
            for d in mod.diagnostics:
                section.diagnostics.append(d.to_json() | {"kind": "instrument"})
            example_coverage = []
            for plan in mod.example_table:
                row = {
                    "id": plan.example_id, "name": plan.name,
                    "color_index": plan.color_index, "enabled": plan.enabled,
                    "line": self._node_line(ast, plan.target_origin_id),
                    "status": None, "error": None, "return": None,
                    "output": [], "covered_lines": [],
                }
                outcome = outcomes.get(plan.example_id)
                if outcome is not None:
                    row["status"] = outcome.status
                    row["error"] = outcome.error_message
                    row["return"] = (outcome.return_snapshot.to_json()
                                     if outcome.return_snapshot else None)
                    row["return_text"] = (outcome.return_snapshot.render_text()
                                          if outcome.return_snapshot else None)
                    row["output"] = list(outcome.output)
                    per_module_ids = {nid for (m, nid) in outcome.executed_node_ids
                                      if m == name}
                    row["covered_lines"] = sorted(lines_for_nodes(ast, per_module_ids))
                section.examples.append(row)
            for pid, plan in sorted(mod.probe_table.items()):
                events = [self._event_json(e, evaluation) for e in query_probe(tracer, pid)]
                section.probes.append({
                    "id": pid, "label": plan.label, "mode": plan.mode,
                    "line": self._node_line(ast, plan.target_origin_id),
                    "target": self._node_key(ast, plan.target_origin_id),
                    "events": events,
                })
            for sid, plan in sorted(mod.slider_table.items()):
                record = tracer.sliders.get(sid)
                section.sliders.append({
                    "id": sid, "label": plan.label,
                    "line": self._node_line(ast, plan.target_origin_id),
                    "target": self._node_key(ast, plan.target_origin_id),
                    "counts": dict(record.counts) if record else {},
                })

        section.executable_lines = sorted(executable_lines(ast))
        section.faded_lines = sorted(self._faded_lines(entry, evaluation))
        section.eligibility = self._eligibility_table(ast)
        section.load_output = list(evaluation.load_output.get(name, []))
        section.stale = False
        entry.last_section = section
        return section

    def _stale_section(self, entry: ModuleEntry, extra_reason: Optional[str]) -> ModuleSection:
        base = entry.last_section
        if base is not None:
            section = ModuleSection(
                name=entry.name, source=entry.source,
                examples=base.examples, probes=base.probes, sliders=base.sliders,
                faded_lines=base.faded_lines, executable_lines=base.executable_lines,
                eligibility=base.eligibility, load_output=base.load_output)
        else:
            section = ModuleSection(name=entry.name, source=entry.source)
        section.stale = True
        section.diagnostics = []
        if entry.parse_error is not None:
            section.diagnostics.append({
                "severity": "error", "kind": "parse",
                "message": entry.parse_error.message,
                "span": location_key(entry.parse_error.span) if entry.parse_error.span else None,
            })
        if extra_reason:
            section.diagnostics.append(
                {"severity": "error", "kind": "instrument", "message": extra_reason})
        return section

    def _faded_lines(self, entry: ModuleEntry, evaluation: Evaluation) -> set[int]:
        name = entry.name
        example_coverage = []
        for outcome in evaluation.outcomes:
            example_coverage.append({nid for (m, nid) in outcome.executed_node_ids
                                     if m == name})
        load_cov = {nid for (m, nid) in evaluation.load_coverage.get(name, set())
                    if m == name}
        return compute_faded_lines(entry.ast, example_coverage, load_cov,
                                   self._any_enabled())

    def _node_line(self, ast: IdentifiedAst, node_id: int) -> Optional[int]:
        node = ast.node_by_id.get(node_id)
        return node.span.start_line if node is not None and node.span else None

    def _node_key(self, ast: IdentifiedAst, node_id: int) -> Optional[list[int]]:
        node = ast.node_by_id.get(node_id)
        if node is None or node.span is None:
            return None
        return list(location_key(node.span))

    def _event_json(self, event, evaluation: Evaluation) -> dict:
        owner_module = event.example_id.split(":", 1)[0]
        example_name = event.example_id
        color = 0
        owner = self.modules.get(owner_module)
        if owner is not None and owner.attached is not None:
            for ex in owner.attached.examples:
                if ex.example_id == event.example_id:
                    example_name = ex.name
                    color = ex.payload.color_index
                    break
        return {
            "example_id": event.example_id,
            "example_name": example_name,
            "color_index": color,
            "phase": event.phase,
            "seq": event.seq,
            "iteration": [[sid, idx] for sid, idx in event.iteration_vector],
            "value": event.snapshot.to_json(),
            "text": event.snapshot.render_text(),
        }

    def _eligibility_table(self, ast: IdentifiedAst) -> dict[str, list[str]]:
        table: dict[str, list[str]] = {}
        lmap = build_location_map(ast)
        for key, node_id in lmap.entries.items():
            node = ast.node_by_id[node_id]
            kinds = [kind for kind, predicate in PREDICATES.items()
                     if predicate(node, ast)]
            if kinds:
                table[",".join(str(k) for k in key)] = kinds
        return table
