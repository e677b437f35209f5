"""Backend selection and chunked trial execution.

The compiled kernels are used when the extension imports; setting
``BECFEEDBACK_PURE=1`` forces the pure-Python fallback. Trials are split into
fixed-size chunks; chunk accumulators are integer tuples, so the merged result
does not depend on the worker count or completion order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from types import ModuleType

from . import _kernels_py

try:
    if os.environ.get("BECFEEDBACK_PURE"):
        raise ImportError("pure-Python backend requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

COMPILED = _compiled is not None
CHUNK = 1 << 15


def kernels(backend: str | None = None) -> ModuleType:
    """Kernel module for ``backend`` in {None, "compiled", "python"}; None picks the default."""
    if backend is None:
        return _compiled or _kernels_py
    if backend == "python":
        return _kernels_py
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available; build the extension")
        return _compiled
    raise ValueError(f"unknown backend {backend!r}")


def backend_name() -> str:
    return "compiled" if COMPILED else "python"


def default_workers() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def run(name: str, key: int, trials: int, args: tuple, *, workers: int = 1,
        backend: str | None = None, first: int = 0) -> tuple[int, ...]:
    """Run kernel ``name`` over trials ``first .. first+trials-1`` and merge accumulators."""
    if trials < 1:
        raise ValueError("need at least one trial")
    fn = getattr(kernels(backend), name)
    bounds = [(a, min(a + CHUNK, first + trials)) for a in range(first, first + trials, CHUNK)]

    def chunk(span: tuple[int, int]) -> tuple[int, ...]:
        return fn(key, span[0], span[1], *args)

    if workers > 1 and len(bounds) > 1:
        # compiled kernels release the GIL
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(chunk, bounds))
    else:
        parts = [chunk(b) for b in bounds]
    return tuple(sum(column) for column in zip(*parts))
