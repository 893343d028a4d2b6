"""Debounced evaluation scheduling around a Session.

Rapid edits coalesce into one evaluation; a newer change cancels a pending
not-yet-started evaluation. Evaluations run on a worker thread with a large
stack so deep example recursion reaches the interpreter's own limit instead
of the host's.
"""

from __future__ import annotations

import threading
from typing import Optional

from .engine import Session
from .report import EvaluationReport
from .worker import run_with_deep_stack


class LiveSession:
    """Session plus debounce; mutations schedule evaluation after a quiet
    window, evaluate_now forces one immediately."""

    def __init__(self, session: Session, debounce_ms: float = 300.0):
        self.session = session
        self.debounce_ms = debounce_ms
        self._timer: Optional[threading.Timer] = None
        self._lock = threading.Lock()
        self._eval_lock = threading.Lock()
        self.evaluation_count = 0

    def update_source(self, name: str, source: str) -> int:
        pending = self.session.update_source(name, source)
        self._schedule()
        return pending

    def set_resource(self, name: str, value) -> None:
        self.session.set_resource(name, value)
        self._schedule()

    def touch(self) -> None:
        self._schedule()

    def _schedule(self) -> None:
        with self._lock:
            if self._timer is not None:
                self._timer.cancel()
            self._timer = threading.Timer(self.debounce_ms / 1000.0, self._fire)
            self._timer.daemon = True
            self._timer.start()

    def _fire(self) -> None:
        with self._lock:
            self._timer = None
        self._evaluate()

    def evaluate_now(self) -> EvaluationReport:
        with self._lock:
            if self._timer is not None:
                self._timer.cancel()
                self._timer = None
        return self._evaluate()

    def _evaluate(self) -> EvaluationReport:
        with self._eval_lock:  # one evaluation at a time per session
            report = self.session.evaluate_all()  # self-schedules the deep stack
            self.evaluation_count += 1
            return report

    def cancel(self) -> None:
        with self._lock:
            if self._timer is not None:
                self._timer.cancel()
                self._timer = None
