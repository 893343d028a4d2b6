"""Deep-stack worker: evaluations run on a thread with a large stack so
interpreter recursion reaches the engine's own 10k activation limit instead
of the host's C stack (CPython frames cost kilobytes of C stack each)."""

from __future__ import annotations

import sys
import threading

WORKER_STACK_BYTES = 512 * 1024 * 1024
WORKER_RECURSION_LIMIT = 400_000

_local = threading.local()


def run_with_deep_stack(fn, *args, **kwargs):
    """Run fn on a big-stack thread; no-op wrapper when already on one."""
    if getattr(_local, "deep", False):
        return fn(*args, **kwargs)
    result: dict = {}

    def target():
        _local.deep = True
        old_limit = sys.getrecursionlimit()
        sys.setrecursionlimit(WORKER_RECURSION_LIMIT)
        try:
            result["value"] = fn(*args, **kwargs)
        except BaseException as exc:  # propagate to caller
            result["error"] = exc
        finally:
            sys.setrecursionlimit(old_limit)
            _local.deep = False

    old_stack = threading.stack_size()
    threading.stack_size(WORKER_STACK_BYTES)
    try:
        thread = threading.Thread(target=target, name="babylang-eval")
        thread.start()
    finally:
        threading.stack_size(old_stack)
    thread.join()
    if "error" in result:
        raise result["error"]
    return result["value"]
