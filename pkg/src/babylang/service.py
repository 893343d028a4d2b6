"""Wire protocol service: newline-delimited JSON messages over WebSocket.

Message kinds: open_session | update_source | set_annotation |
remove_annotation | set_resource | evaluate | report | error. Every report
carries the revision it answers. Mutating messages schedule a debounced
evaluation; `evaluate` forces one immediately. Reports broadcast to every
connected editor.
"""

from __future__ import annotations

import asyncio
import json
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .annotations.extract import scan_structured_comments
from .annotations.model import Annotation, AnnotationSyntaxError, parse_payload, serialize_annotation
from .instrument import InstrumentConfig
from .lang import parse_expression_text
from .lang.lexer import normalize_newlines
from .runtime import CanvasMock, Evaluation
from .session import LiveSession, Session
from .session.report import EvaluationReport

MESSAGE_TYPES = ("open_session", "update_source", "set_annotation",
                 "remove_annotation", "set_resource", "evaluate")


class ServiceState:
    def __init__(self, root_dir: Optional[Path] = None):
        self.root_dir = root_dir
        self.live: Optional[LiveSession] = None
        self.connections: list[WebSocket] = []
        self.loop: Optional[asyncio.AbstractEventLoop] = None

    # -- broadcasting (called from worker threads) --

    def broadcast_report(self, report: EvaluationReport) -> None:
        message = json.dumps({"type": "report", "revision": report.revision,
                              "payload": report.to_json()},
                             ensure_ascii=False) + "\n"
        if self.loop is None:
            return
        asyncio.run_coroutine_threadsafe(self._send_all(message), self.loop)

    async def _send_all(self, message: str) -> None:
        for ws in list(self.connections):
            try:
                await ws.send_text(message)
            except Exception:
                if ws in self.connections:
                    self.connections.remove(ws)

    # -- message handling --

    def handle(self, data: dict) -> Optional[dict]:
        kind = data.get("type")
        payload = data.get("payload") or {}
        if kind not in MESSAGE_TYPES:
            raise ValueError(f"unknown message type {kind!r}")
        if kind == "open_session":
            return self._open_session(payload)
        if self.live is None:
            raise ValueError("no session open; send open_session first")
        if kind == "update_source":
            self.live.update_source(str(payload["module"]), str(payload["text"]))
            return None
        if kind == "set_annotation":
            self._set_annotation(payload)
            return None
        if kind == "remove_annotation":
            self._remove_annotation(payload)
            return None
        if kind == "set_resource":
            self._set_resource(payload)
            return None
        if kind == "evaluate":
            self.live.evaluate_now()  # report reaches clients via broadcast
            return None
        return None

    def _open_session(self, payload: dict) -> None:
        config_data = payload.get("config") or {}
        config = InstrumentConfig(
            time_budget_ms=float(config_data.get("time_budget_ms", 500.0)),
            snapshot_depth=int(config_data.get("snapshot_depth", 3)),
        )
        session = Session(config=config, root_dir=self.root_dir)
        modules = payload.get("modules") or {}
        for name, source in modules.items():
            session.open_module(str(name), str(source))
        templates = payload.get("templates")
        if templates:
            session.load_templates(str(templates))
        for name, binding in (payload.get("resources") or {}).items():
            session.set_resource(name, self._make_resource(name, binding, config))
        debounce = float(config_data.get("debounce_ms", 300.0))
        if self.live is not None:
            self.live.cancel()
        self.live = LiveSession(session, debounce_ms=debounce)
        session.subscribe(self.broadcast_report)
        return None

    def _make_resource(self, name: str, binding, config: InstrumentConfig):
        if isinstance(binding, dict) and "mock" in binding:
            if binding["mock"] != "canvas":
                raise ValueError(f"unknown mock {binding['mock']!r}")
            return CanvasMock(name)
        if isinstance(binding, dict) and "expr" in binding:
            evaluator = Evaluation({}, config)
            return evaluator.eval_expr(parse_expression_text(binding["expr"]),
                                       evaluator.builtins_env)
        raise ValueError(f"resource {name!r}: needs 'mock' or 'expr'")

    def _set_resource(self, payload: dict) -> None:
        name = str(payload["name"])
        value = self._make_resource(name, payload.get("binding"),
                                    self.live.session.config)
        self.live.set_resource(name, value)

    def _set_annotation(self, payload: dict) -> None:
        """Insert or replace the structured comment on the given line."""
        module = str(payload["module"])
        line = int(payload["line"])
        annotation = Annotation(
            kind=str(payload["kind"]),
            payload=parse_payload(str(payload["kind"]), payload.get("annotation"), None),
            anchor_span=None)
        comment = serialize_annotation(annotation)
        entry = self.live.session.modules.get(module)
        if entry is None:
            raise ValueError(f"unknown module {module!r}")
        lines = normalize_newlines(entry.source).split("\n")
        replaced = self._annotation_only_line(entry.source, line)
        indent = ""
        anchor = min(max(line, 1), len(lines) + 1)
        if anchor <= len(lines):
            text = lines[anchor - 1]
            indent = text[:len(text) - len(text.lstrip())]
        if replaced:
            lines[anchor - 1] = indent + comment
        else:
            lines.insert(anchor - 1, indent + comment)
        self.live.update_source(module, "\n".join(lines))

    def _remove_annotation(self, payload: dict) -> None:
        module = str(payload["module"])
        line = int(payload["line"])
        entry = self.live.session.modules.get(module)
        if entry is None:
            raise ValueError(f"unknown module {module!r}")
        if not self._annotation_only_line(entry.source, line):
            raise ValueError(f"no annotation comment on line {line}")
        lines = normalize_newlines(entry.source).split("\n")
        del lines[line - 1]
        self.live.update_source(module, "\n".join(lines))

    @staticmethod
    def _annotation_only_line(source: str, line: int) -> bool:
        for comment in scan_structured_comments(source):
            if comment.span.start_line == line == comment.span.end_line:
                return True
        return False


def create_app(root_dir: Optional[Path] = None) -> FastAPI:
    from contextlib import asynccontextmanager

    state = ServiceState(root_dir=root_dir)

    @asynccontextmanager
    async def lifespan(_app):
        state.loop = asyncio.get_running_loop()
        yield
        if state.live is not None:
            state.live.cancel()

    app = FastAPI(title="babylang-service", lifespan=lifespan)
    app.state.service = state

    @app.websocket("/ws")
    async def websocket_endpoint(ws: WebSocket):
        await ws.accept()
        if state.loop is None:
            state.loop = asyncio.get_running_loop()
        state.connections.append(ws)
        try:
            while True:
                raw = await ws.receive_text()
                for chunk in raw.split("\n"):
                    if not chunk.strip():
                        continue
                    await _handle_chunk(ws, chunk)
        except WebSocketDisconnect:
            pass
        finally:
            if ws in state.connections:
                state.connections.remove(ws)

    async def _handle_chunk(ws: WebSocket, chunk: str) -> None:
        revision = state.live.session.revision if state.live else 0
        try:
            data = json.loads(chunk)
            if not isinstance(data, dict):
                raise ValueError("message must be a JSON object")
            await asyncio.to_thread(state.handle, data)
        except (ValueError, KeyError, TypeError, AnnotationSyntaxError) as exc:
            await ws.send_text(json.dumps(
                {"type": "error", "revision": revision,
                 "payload": {"message": str(exc)}}) + "\n")

    return app
