"""Tree-walking interpreter for executable module trees.

One Evaluation object owns everything mutable for a single run: the module
cache, the tracer, slider counters, the activation stack, coverage sinks.
The same core executes instrumented trees (guards, captures, example
blocks) and plain trees (the differential oracle path).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from ..instrument.config import InstrumentConfig
from ..instrument.module import ExamplePlan, InstrumentedModule, ValuePlan
from ..lang import ParseError, nodes as N, parse_module
from . import values as V
from .builtins import make_builtins
from .snapshots import IdentityRegistry, snapshot
from .tracing import ExampleOutcome, TraceStore

MAX_CALL_DEPTH = 10_000
_STMT_DEADLINE_STRIDE = 512


class ReturnSignal(Exception):
    def __init__(self, value):
        self.value = value


class Environment:
    __slots__ = ("vars", "consts", "parent", "function_boundary")

    def __init__(self, parent: "Environment | None" = None, function_boundary: bool = False):
        self.vars: dict[str, Any] = {}
        self.consts: set[str] = set()
        self.parent = parent
        self.function_boundary = function_boundary

    def define(self, name: str, value, const: bool = False) -> None:
        self.vars[name] = value
        if const:
            self.consts.add(name)

    def define_var(self, name: str, value) -> None:
        """Function-scoped declaration: lands in the nearest function/module scope."""
        env = self
        while not env.function_boundary and env.parent is not None:
            env = env.parent
        env.vars[name] = value

    def lookup(self, name: str):
        env = self
        while env is not None:
            if name in env.vars:
                return env.vars[name]
            env = env.parent
        raise V.BabyRuntimeError(f"{name} is not defined")

    def assign(self, name: str, value) -> None:
        env = self
        while env is not None:
            if name in env.vars:
                if name in env.consts:
                    raise V.BabyRuntimeError(f"assignment to constant {name}")
                env.vars[name] = value
                return
            env = env.parent
        raise V.BabyRuntimeError(f"{name} is not defined")

    def has(self, name: str) -> bool:
        env = self
        while env is not None:
            if name in env.vars:
                return True
            env = env.parent
        return False


@dataclass
class ModuleInstance:
    name: str
    env: Environment
    exports: dict[str, Any] = field(default_factory=dict)
    failed: Optional[str] = None
    loading: bool = False


@dataclass
class ExampleState:
    example_id: str
    outcome: ExampleOutcome


class Evaluation:
    """Mutable state for one evaluation run across all session modules."""

    def __init__(self, registry: dict[str, InstrumentedModule],
                 config: InstrumentConfig,
                 plain_loader: Optional[Callable[[str], Optional[str]]] = None,
                 resources: Optional[dict[str, Any]] = None,
                 coverage_hook: bool = True):
        self.registry = registry
        self.config = config
        self.plain_loader = plain_loader or (lambda name: None)
        self.resources = resources or {}
        self.tracer = TraceStore()
        self.outcomes: list[ExampleOutcome] = []
        self.module_cache: dict[str, ModuleInstance] = {}
        self.factories: dict[str, tuple[ModuleInstance, N.FactoryDecl]] = {}
        self.builtins_env = Environment(function_boundary=True)
        for name, value in make_builtins().items():
            self.builtins_env.define(name, value, const=True)
        self.current_example: Optional[ExampleState] = None
        self.code_module_stack: list[str] = []
        self.counters: dict[str, int] = {}
        self.slider_stack: list[tuple[str, int]] = []
        self.deadline: Optional[float] = None
        self.depth = 0
        self.op_count = 0
        self.coverage_hook = coverage_hook
        self.identity = IdentityRegistry()
        self.load_coverage: dict[str, set[tuple[str, int]]] = {}
        self.load_output: dict[str, list[str]] = {}
        for mod in registry.values():
            for pid, plan in mod.probe_table.items():
                self.tracer.register_probe(pid, plan.target_origin_id, plan.label)
            for sid, plan in mod.slider_table.items():
                self.tracer.register_slider(sid, plan.target_origin_id)

    # -- context helpers --

    @property
    def current_code_module(self) -> str:
        return self.code_module_stack[-1] if self.code_module_stack else "<host>"

    def emit_output(self, line: str) -> None:
        if self.current_example is not None:
            self.current_example.outcome.output.append(line)
        else:
            self.load_output.setdefault(self.current_code_module, []).append(line)

    def record_coverage(self, node: N.Node) -> None:
        if not self.coverage_hook or node.origin_id < 0:
            return
        key = (self.current_code_module, node.origin_id)
        if self.current_example is not None:
            self.current_example.outcome.executed_node_ids.add(key)
        else:
            self.load_coverage.setdefault(self.current_code_module, set()).add(key)

    def check_deadline(self) -> None:
        if self.deadline is not None and time.perf_counter() > self.deadline:
            raise V.BabyTimeout()

    def _loop_tick(self) -> None:
        """Deadline backstop for loop back-edges; guards cover instrumented
        trees, this also covers plain ones (and empty loop bodies)."""
        self.op_count += 1
        if self.op_count % _STMT_DEADLINE_STRIDE == 0:
            self.check_deadline()

    # -- module loading --

    def load_module(self, name: str) -> ModuleInstance:
        cached = self.module_cache.get(name)
        if cached is not None:
            if cached.failed is not None:
                raise V.ModuleError(cached.failed)
            return cached
        if name in self.registry:
            return self._load_instrumented(name, self.registry[name])
        return self._load_plain(name)

    def run_modules(self, order: list[str]) -> None:
        """Load the given modules (dependency order); examples run at load."""
        for name in order:
            try:
                self.load_module(name)
            except V.BabyError as exc:
                self._abort_module_examples(name, str(exc))

    def _load_instrumented(self, name: str, mod: InstrumentedModule) -> ModuleInstance:
        instance = ModuleInstance(name=name, env=Environment(self.builtins_env,
                                                             function_boundary=True))
        instance.loading = True
        self.module_cache[name] = instance
        saved_deadline = self.deadline
        self.deadline = time.perf_counter() + self.config.time_budget_ms / 1000.0
        self.code_module_stack.append(name)
        try:
            for stmt in mod.exec_tree.body:
                self.exec_stmt(stmt, instance.env)
        except V.BabyError as exc:
            instance.failed = f"module {name} failed: {exc}"
            self._abort_module_examples(name, instance.failed)
            raise V.ModuleError(instance.failed)
        finally:
            instance.loading = False
            self.code_module_stack.pop()
            self.deadline = saved_deadline
        return instance

    def _abort_module_examples(self, name: str, message: str) -> None:
        mod = self.registry.get(name)
        if mod is None:
            return
        reported = {o.example_id for o in self.outcomes}
        for plan in mod.example_table:
            if plan.enabled and plan.example_id not in reported:
                self.outcomes.append(ExampleOutcome(
                    example_id=plan.example_id, name=plan.name, status="error",
                    error_message=message, color_index=plan.color_index))

    def _load_plain(self, name: str) -> ModuleInstance:
        source = self.plain_loader(name)
        if source is None:
            raise V.BabyRuntimeError(f"cannot resolve import {name!r}")
        try:
            ast = parse_module(source, name)
        except ParseError as exc:
            raise V.ModuleError(f"module {name} failed to parse: {exc}")
        instance = ModuleInstance(name=name, env=Environment(self.builtins_env,
                                                             function_boundary=True))
        instance.loading = True
        self.module_cache[name] = instance
        self.code_module_stack.append(name)
        try:
            for stmt in ast.root.body:
                self.exec_stmt(stmt, instance.env)
        except V.BabyError as exc:
            instance.failed = f"module {name} failed: {exc}"
            raise V.ModuleError(instance.failed)
        finally:
            instance.loading = False
            self.code_module_stack.pop()
        return instance

    # -- statements --

    def exec_stmt(self, node: N.Node, env: Environment) -> None:
        self.op_count += 1
        if self.op_count % _STMT_DEADLINE_STRIDE == 0:
            self.check_deadline()
        kind = node.kind
        if kind in N.STATEMENT_KINDS:
            self.record_coverage(node)

        if kind == "ExprStmt":
            self.eval_expr(node.value, env)
        elif kind == "VarDecl":
            value = self.eval_expr(node.init, env) if node.init is not None else None
            if node.decl_kind == "var":
                env.define_var(node.name.name, value)
            else:
                env.define(node.name.name, value, const=(node.decl_kind == "const"))
        elif kind == "If":
            if V.truthy(self.eval_expr(node.test, env)):
                self.exec_body(node.then, env)
            elif node.orelse is not None:
                self.exec_body(node.orelse, env)
        elif kind == "While":
            while V.truthy(self.eval_expr(node.test, env)):
                self._loop_tick()
                self.exec_body(node.body, env)
        elif kind == "For":
            loop_env = Environment(env)
            if node.init is not None:
                self.exec_stmt(node.init, loop_env)
            while node.test is None or V.truthy(self.eval_expr(node.test, loop_env)):
                self._loop_tick()
                self.exec_body(node.body, loop_env)
                if node.update is not None:
                    self.eval_expr(node.update, loop_env)
        elif kind == "Return":
            value = self.eval_expr(node.value, env) if node.value is not None else None
            if node.probe_id is not None and self.current_example is not None:
                self.tracer.record(node.probe_id, self.current_example.example_id,
                                   "before", tuple(self.slider_stack),
                                   snapshot(value, self.config.snapshot_depth, self.identity))
            raise ReturnSignal(value)
        elif kind == "FunctionDecl":
            fn = V.BabyFunction(node.name.name, [p.name for p in node.params],
                                node.body, env, home_module=self.current_code_module)
            env.define(node.name.name, fn)
        elif kind == "ClassDecl":
            env.define(node.name.name, self._make_class(node, env))
        elif kind == "ImportDecl":
            self._exec_import(node, env)
        elif kind == "ExportDecl":
            self._exec_export(node, env)
        elif kind == "Block":
            self.exec_block(node, env)
        elif kind == "GuardCheck":
            self.check_deadline()
        elif kind == "CounterBump":
            count = self.counters.get(node.slider_id, 0) + 1
            self.counters[node.slider_id] = count
            self.slider_stack.append((node.slider_id, count))
        elif kind == "ProbeCapture":
            self._exec_capture(node, env)
        elif kind == "FactoryDecl":
            instance = self.module_cache[self.current_code_module]
            self.factories[node.name] = (instance, node)
        elif kind == "ExampleBlock":
            self._exec_example(node.plan, env)
        elif kind == "TryCatch":
            try:
                self.exec_block(node.body, env)
            except V.BabyRuntimeError:
                if node.handler is not None:
                    self.exec_block(node.handler, Environment(env))
        else:
            raise V.BabyRuntimeError(f"cannot execute node kind {kind}")

    def exec_body(self, node: N.Node, env: Environment) -> None:
        if node.kind == "Block":
            self.exec_block(node, env)
        else:
            self.exec_stmt(node, env)

    def exec_block(self, block: N.Block, env: Environment) -> None:
        block_env = Environment(env)
        mark = len(self.slider_stack)
        try:
            for stmt in block.body:
                self.exec_stmt(stmt, block_env)
        finally:
            del self.slider_stack[mark:]

    def _exec_capture(self, node: N.ProbeCapture, env: Environment) -> None:
        if self.current_example is None:
            return
        try:
            value = self.eval_expr(node.expr, env)
        except V.BabyTimeout:
            raise
        except V.BabyError:
            return  # capture is best-effort; the statement itself still runs
        self.tracer.record(node.probe_id, self.current_example.example_id, node.phase,
                           tuple(self.slider_stack),
                           snapshot(value, self.config.snapshot_depth, self.identity))

    def _exec_import(self, node: N.ImportDecl, env: Environment) -> None:
        from ..instrument.passes import module_stem
        name = module_stem(node.source)
        module = self.load_module(name)
        if node.default_name is not None:
            if "default" not in module.exports:
                if not module.loading:
                    raise V.BabyRuntimeError(f"module {name} has no default export")
                env.define(node.default_name, None)
            else:
                env.define(node.default_name, module.exports["default"])
        for binding in node.named:
            if binding not in module.exports:
                if not module.loading:
                    raise V.BabyRuntimeError(f"module {name} does not export {binding!r}")
                env.define(binding, None)
            else:
                env.define(binding, module.exports[binding])

    def _exec_export(self, node: N.ExportDecl, env: Environment) -> None:
        decl = node.decl
        self.exec_stmt(decl, env)
        module = self.module_cache.get(self.current_code_module)
        if module is None:
            return
        if decl.kind in ("FunctionDecl", "ClassDecl", "VarDecl"):
            binding = decl.name.name
            value = env.lookup(binding)
            module.exports["default" if node.default else binding] = value

    def _make_class(self, node: N.ClassDecl, env: Environment) -> V.BabyClass:
        cls = V.BabyClass(node.name.name)
        for method in node.methods:
            fn = V.BabyFunction(method.name.name, [p.name for p in method.params],
                                method.body, env, home_module=self.current_code_module)
            if method.is_ctor:
                cls.ctor = fn
            elif method.is_static:
                cls.static_methods[method.name.name] = fn
            else:
                cls.methods[method.name.name] = fn
        return cls

    # -- example blocks --

    def _exec_example(self, plan: ExamplePlan, module_env: Environment) -> None:
        outcome = ExampleOutcome(example_id=plan.example_id, name=plan.name,
                                 color_index=plan.color_index)
        self.outcomes.append(outcome)
        self.counters.clear()
        self.current_example = ExampleState(plan.example_id, outcome)
        saved_deadline = self.deadline
        self.deadline = time.perf_counter() + self.config.time_budget_ms / 1000.0
        try:
            this_value = self.materialize(plan.this_plan, module_env)
            scope = Environment(module_env, function_boundary=True)
            for name, value_plan in zip(plan.param_names, plan.param_plans):
                scope.define(name, self.materialize(value_plan, module_env))
            for stmt in plan.prescript:
                self.exec_stmt(stmt, scope)
            args = [scope.lookup(name) for name in plan.param_names]
            result = self._invoke_example_target(plan, module_env, this_value, args)
            outcome.return_snapshot = snapshot(result, self.config.snapshot_depth,
                                               self.identity)
            for stmt in plan.postscript:
                self.exec_stmt(stmt, scope)
        except V.BabyTimeout as exc:
            outcome.status = "timeout"
            outcome.error_message = str(exc) or "example exceeded its time budget"
        except V.BabyError as exc:
            outcome.status = "error"
            outcome.error_message = str(exc)
        except ReturnSignal:
            outcome.status = "error"
            outcome.error_message = "illegal return in example script"
        finally:
            for slider_id, count in self.counters.items():
                self.tracer.record_slider_count(slider_id, plan.example_id, count)
            self.deadline = saved_deadline
            self.current_example = None

    def _invoke_example_target(self, plan: ExamplePlan, module_env: Environment,
                               this_value, args):
        if plan.target_kind == "function":
            fn = module_env.lookup(plan.function_name)
            if not V.is_callable(fn):
                raise V.BabyRuntimeError(f"{plan.function_name} is not callable")
            return self.invoke(fn, this_value, args)
        cls = module_env.lookup(plan.class_name)
        if not isinstance(cls, V.BabyClass):
            raise V.BabyRuntimeError(f"{plan.class_name} is not a class")
        if plan.is_static:
            fn = cls.static_methods.get(plan.function_name)
            if fn is None:
                raise V.BabyRuntimeError(
                    f"{plan.class_name} has no static method {plan.function_name}")
            return self.invoke(fn, cls, args)
        fn = cls.methods.get(plan.function_name)
        if fn is None:
            raise V.BabyRuntimeError(f"{plan.class_name} has no method {plan.function_name}")
        return self.invoke(fn, this_value, args)

    def materialize(self, plan: ValuePlan, module_env: Environment):
        if plan.variant == "literal_source":
            return self.eval_expr(plan.expr, Environment(module_env))
        if plan.variant in ("template_ref", "custom_ref"):
            entry = self.factories.get(plan.text)
            if entry is None:
                raise V.BabyRuntimeError(f"unknown template {plan.text!r}")
            return self.run_factory(*entry)
        if plan.variant == "resource_ref":
            if plan.text not in self.resources:
                raise V.BabyRuntimeError(f"unknown resource {plan.text!r}")
            return self.resources[plan.text]
        raise V.BabyRuntimeError(f"unknown value spec variant {plan.variant}")

    def run_factory(self, instance: ModuleInstance, node: N.FactoryDecl):
        """Factories produce a fresh value per invocation."""
        if node.factory_kind == "ctor":
            cls = instance.env.lookup(node.class_name)
            if not isinstance(cls, V.BabyClass):
                raise V.BabyRuntimeError(f"{node.class_name} is not a class")
            args = [self.materialize(p, instance.env) for p in node.arg_plans]
            return self.instantiate(cls, args)
        env = Environment(instance.env, function_boundary=True)
        self.code_module_stack.append(instance.name)
        try:
            for stmt in node.body[:-1]:
                self.exec_stmt(stmt, env)
            last = node.body[-1]
            if last.kind != "ExprStmt":
                raise V.BabyRuntimeError(f"template {node.name!r} must end in an expression")
            return self.eval_expr(last.value, env)
        finally:
            self.code_module_stack.pop()

    # -- calls --

    def invoke(self, fn, this_value, args):
        if isinstance(fn, V.HostFunction):
            return fn.fn(self, args)
        if isinstance(fn, V.BoundMethod):
            return self.invoke(fn.func, fn.receiver, args)
        if not isinstance(fn, V.BabyFunction):
            raise V.BabyRuntimeError(f"{V.type_tag(fn)} is not callable")
        self.depth += 1
        if self.depth > MAX_CALL_DEPTH:
            self.depth -= 1
            raise V.BabyRuntimeError(f"maximum call depth exceeded ({MAX_CALL_DEPTH})")
        env = Environment(fn.closure, function_boundary=True)
        for i, name in enumerate(fn.params):
            env.define(name, args[i] if i < len(args) else None)
        if not fn.is_arrow:
            env.define("this", this_value)
        self.code_module_stack.append(fn.home_module)
        try:
            if fn.body is not None and fn.body.kind == "Block":
                try:
                    self.exec_block(fn.body, env)
                except ReturnSignal as signal:
                    return signal.value
                return None
            return self.eval_expr(fn.body, env)
        finally:
            self.code_module_stack.pop()
            self.depth -= 1

    def instantiate(self, cls: V.BabyClass, args):
        obj = V.BabyObject(baby_class=cls)
        if cls.ctor is not None:
            self.invoke(cls.ctor, obj, args)
        return obj

    # -- expressions --

    def eval_expr(self, node: N.Node, env: Environment):
        kind = node.kind
        if kind == "NumberLit":
            return node.value
        if kind == "StringLit":
            return node.value
        if kind == "BoolLit":
            return node.value
        if kind == "NullLit":
            return None
        if kind == "Identifier":
            if node.name == "this":
                return env.lookup("this") if env.has("this") else None
            return env.lookup(node.name)
        if kind == "TemplateLit":
            parts = [node.quasis[0]]
            for i, expr in enumerate(node.exprs):
                parts.append(V.to_text(self.eval_expr(expr, env)))
                parts.append(node.quasis[i + 1])
            return "".join(parts)
        if kind == "ArrayLit":
            return V.BabyArray([self.eval_expr(e, env) for e in node.elements])
        if kind == "ObjectLit":
            props = {}
            for key, value in zip(node.keys, node.values):
                if key.kind == "Identifier":
                    prop = key.name
                elif key.kind == "StringLit":
                    prop = key.value
                else:
                    prop = V.format_number(key.value)
                props[prop] = self.eval_expr(value, env)
            return V.BabyObject(props)
        if kind == "FunctionExpr":
            return V.BabyFunction("", [p.name for p in node.params], node.body, env,
                                  home_module=self.current_code_module)
        if kind == "ArrowExpr":
            return V.BabyFunction("", [p.name for p in node.params], node.body, env,
                                  is_arrow=True, home_module=self.current_code_module)
        if kind == "Binary":
            return self._eval_binary(node, env)
        if kind == "Unary":
            operand = self.eval_expr(node.operand, env)
            if node.op == "!":
                return not V.truthy(operand)
            if not isinstance(operand, float) or isinstance(operand, bool):
                raise V.BabyRuntimeError(f"unary - needs a number, got {V.type_tag(operand)}")
            return -operand
        if kind == "Assignment":
            return self._eval_assignment(node, env)
        if kind == "Update":
            old = self._read_target(node.target, env)
            if not isinstance(old, float) or isinstance(old, bool):
                raise V.BabyRuntimeError(f"++ needs a number, got {V.type_tag(old)}")
            new = old + 1.0
            self._write_target(node.target, new, env)
            return new if node.prefix else old
        if kind == "Call":
            return self._eval_call(node, env)
        if kind == "New":
            callee = self.eval_expr(node.callee, env)
            if not isinstance(callee, V.BabyClass):
                raise V.BabyRuntimeError(f"new needs a class, got {V.type_tag(callee)}")
            args = [self.eval_expr(a, env) for a in node.args]
            return self.instantiate(callee, args)
        if kind == "Member":
            obj = self.eval_expr(node.obj, env)
            return self.get_member(obj, node.prop)
        if kind == "Index":
            obj = self.eval_expr(node.obj, env)
            index = self.eval_expr(node.index, env)
            return self.get_index(obj, index)
        raise V.BabyRuntimeError(f"cannot evaluate node kind {kind}")

    def _eval_call(self, node: N.Call, env: Environment):
        callee = node.callee
        if callee.kind == "Member":
            receiver = self.eval_expr(callee.obj, env)
            fn = self.get_member(receiver, callee.prop)
            if not V.is_callable(fn):
                raise V.BabyRuntimeError(
                    f"{V.type_tag(receiver)}.{callee.prop} is not a function")
            args = [self.eval_expr(a, env) for a in node.args]
            if isinstance(fn, V.BoundMethod):
                return self.invoke(fn.func, fn.receiver, args)
            return self.invoke(fn, receiver, args)
        if callee.kind == "Index":
            receiver = self.eval_expr(callee.obj, env)
            fn = self.get_index(receiver, self.eval_expr(callee.index, env))
            args = [self.eval_expr(a, env) for a in node.args]
            if isinstance(fn, V.BoundMethod):
                return self.invoke(fn.func, fn.receiver, args)
            return self.invoke(fn, receiver, args)
        fn = self.eval_expr(callee, env)
        args = [self.eval_expr(a, env) for a in node.args]
        if not V.is_callable(fn):
            label = callee.name if callee.kind == "Identifier" else V.type_tag(fn)
            raise V.BabyRuntimeError(f"{label} is not a function")
        return self.invoke(fn, None, args)

    def _eval_binary(self, node: N.Binary, env: Environment):
        op = node.op
        if op == "&&":
            left = self.eval_expr(node.left, env)
            return self.eval_expr(node.right, env) if V.truthy(left) else left
        if op == "||":
            left = self.eval_expr(node.left, env)
            return left if V.truthy(left) else self.eval_expr(node.right, env)
        left = self.eval_expr(node.left, env)
        right = self.eval_expr(node.right, env)
        if op == "===":
            return V.strict_equals(left, right)
        if op == "!==":
            return not V.strict_equals(left, right)
        if op == "==":
            return V.loose_equals(left, right)
        if op == "!=":
            return not V.loose_equals(left, right)
        if op == "+":
            if isinstance(left, str) or isinstance(right, str):
                return V.to_text(left) + V.to_text(right)
            return self._arith(left, right, op)
        if op in ("-", "*", "/", "%"):
            return self._arith(left, right, op)
        if op == ">>":
            return float(_to_int32(left) >> (_to_int32(right) & 31))
        if op in ("<", "<=", ">", ">="):
            return self._compare(left, right, op)
        raise V.BabyRuntimeError(f"unknown operator {op}")

    def _arith(self, left, right, op):
        if not _is_number(left) or not _is_number(right):
            raise V.BabyRuntimeError(
                f"operator {op} needs numbers, got {V.type_tag(left)} and {V.type_tag(right)}")
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            if right == 0.0:
                if left == 0.0 or math.isnan(left):
                    return float("nan")
                return math.copysign(float("inf"), left * math.copysign(1.0, right))
            return left / right
        if op == "%":
            if right == 0.0:
                return float("nan")
            return math.fmod(left, right)
        raise AssertionError(op)

    def _compare(self, left, right, op):
        if _is_number(left) and _is_number(right):
            pass
        elif isinstance(left, str) and isinstance(right, str):
            pass
        else:
            raise V.BabyRuntimeError(
                f"cannot compare {V.type_tag(left)} with {V.type_tag(right)}")
        if op == "<":
            return left < right
        if op == "<=":
            return left <= right
        if op == ">":
            return left > right
        return left >= right

    def _eval_assignment(self, node: N.Assignment, env: Environment):
        if node.op == "=":
            value = self.eval_expr(node.value, env)
        else:
            old = self._read_target(node.target, env)
            rhs = self.eval_expr(node.value, env)
            binary_op = node.op[0]  # += -> +, etc.
            if binary_op == "+" and (isinstance(old, str) or isinstance(rhs, str)):
                value = V.to_text(old) + V.to_text(rhs)
            else:
                value = self._arith(old, rhs, binary_op)
        self._write_target(node.target, value, env)
        return value

    def _read_target(self, target: N.Node, env: Environment):
        if target.kind == "Identifier":
            return env.lookup(target.name)
        if target.kind == "Member":
            return self.get_member(self.eval_expr(target.obj, env), target.prop)
        if target.kind == "Index":
            return self.get_index(self.eval_expr(target.obj, env),
                                  self.eval_expr(target.index, env))
        raise V.BabyRuntimeError("invalid assignment target")

    def _write_target(self, target: N.Node, value, env: Environment) -> None:
        if target.kind == "Identifier":
            env.assign(target.name, value)
        elif target.kind == "Member":
            self.set_member(self.eval_expr(target.obj, env), target.prop, value)
        elif target.kind == "Index":
            self.set_index(self.eval_expr(target.obj, env),
                           self.eval_expr(target.index, env), value)
        else:
            raise V.BabyRuntimeError("invalid assignment target")

    # -- property access --

    def get_member(self, obj, prop: str):
        if obj is None:
            raise V.BabyRuntimeError(f"cannot read property {prop!r} of null")
        if isinstance(obj, V.BabyObject):
            if prop in obj.props:
                return obj.props[prop]
            if obj.baby_class is not None:
                method = obj.baby_class.methods.get(prop)
                if method is not None:
                    return V.BoundMethod(method, obj)
            return None
        if isinstance(obj, V.BabyArray):
            if prop == "length":
                return float(len(obj.items))
            return None
        if isinstance(obj, str):
            if prop == "length":
                return float(len(obj))
            return None
        if isinstance(obj, V.BabyClass):
            if prop in obj.static_methods:
                return obj.static_methods[prop]
            return obj.props.get(prop)
        if isinstance(obj, V.HostNamespace):
            return obj.members.get(prop)
        if isinstance(obj, V.HostResource):
            member = getattr(obj, "member", None)
            if member is not None:
                return member(prop)
            return obj.members.get(prop)
        if isinstance(obj, (bool, float)):
            raise V.BabyRuntimeError(f"cannot read property {prop!r} of {V.type_tag(obj)}")
        if V.is_callable(obj):
            return None
        raise V.BabyRuntimeError(f"cannot read property {prop!r} of {V.type_tag(obj)}")

    def set_member(self, obj, prop: str, value) -> None:
        if isinstance(obj, V.BabyObject):
            obj.props[prop] = value
            return
        if isinstance(obj, V.BabyClass):
            obj.props[prop] = value
            return
        if obj is None:
            raise V.BabyRuntimeError(f"cannot set property {prop!r} of null")
        raise V.BabyRuntimeError(f"cannot set property {prop!r} of {V.type_tag(obj)}")

    def get_index(self, obj, index):
        if isinstance(obj, V.BabyArray):
            i = _as_array_index(index)
            if i is None or i < 0 or i >= len(obj.items):
                return None
            return obj.items[i]
        if isinstance(obj, str):
            i = _as_array_index(index)
            if i is None or i < 0 or i >= len(obj):
                return None
            return obj[i]
        if isinstance(obj, (V.BabyObject, V.BabyClass)):
            return self.get_member(obj, V.to_property_key(index))
        if obj is None:
            raise V.BabyRuntimeError("cannot index null")
        raise V.BabyRuntimeError(f"cannot index {V.type_tag(obj)}")

    def set_index(self, obj, index, value) -> None:
        if isinstance(obj, V.BabyArray):
            i = _as_array_index(index)
            if i is None or i < 0:
                raise V.BabyRuntimeError(f"invalid array index {V.to_text(index)}")
            while len(obj.items) < i:
                obj.items.append(None)
            if i == len(obj.items):
                obj.items.append(value)
            else:
                obj.items[i] = value
            return
        if isinstance(obj, (V.BabyObject, V.BabyClass)):
            self.set_member(obj, V.to_property_key(index), value)
            return
        if obj is None:
            raise V.BabyRuntimeError("cannot index null")
        raise V.BabyRuntimeError(f"cannot index {V.type_tag(obj)}")


def _is_number(value) -> bool:
    return isinstance(value, float) and not isinstance(value, bool)


def _to_int32(value) -> int:
    if not _is_number(value):
        raise V.BabyRuntimeError(f">> needs numbers, got {V.type_tag(value)}")
    if math.isnan(value) or math.isinf(value):
        return 0
    n = int(value) & 0xFFFFFFFF
    return n - 0x100000000 if n >= 0x80000000 else n


def _as_array_index(index) -> Optional[int]:
    if isinstance(index, float) and not isinstance(index, bool) \
            and not math.isnan(index) and index == int(index):
        return int(index)
    if isinstance(index, str):
        try:
            f = float(index)
        except ValueError:
            return None
        if f == int(f):
            return int(f)
    return None
