"""Order-preserving parallel map used by the exhaustive sweeps."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def thread_cap(requested: int | None = None) -> int:
    """Worker count: explicit request, else PRESLAB_THREADS, else 1."""
    if requested is None:
        raw = os.environ.get("PRESLAB_THREADS", "1")
        try:
            requested = int(raw)
        except ValueError:
            requested = 1
    return max(1, requested)


def ordered_map(func: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    # Results come back in input order, so merged reports do not depend on scheduling.
    items = list(items)
    workers = min(thread_cap(threads), len(items))
    if workers <= 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
