"""Seed derivation and an order-preserving thread pool map.

Results never depend on the worker count: every task gets a seed derived
from the master seed and its own path, and results are consumed in task
order.
"""

from __future__ import annotations

import hashlib
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "RAINBOWSUB_THREADS"


def derive_seed(master: int, *path) -> int:
    """Stable 63-bit seed for the task at ``path`` under ``master``."""
    text = "/".join([str(int(master))] + [str(p) for p in path])
    digest = hashlib.blake2b(text.encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1


def resolve_threads(threads: int | None = None) -> int:
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        threads = int(env) if env else 1
    if threads < 1:
        raise ValueError("thread count must be positive")
    return threads


def run_chunks(fn: Callable[[T], R], items: Sequence[T], workers: int,
               stop: Callable[[R], bool] | None = None) -> Iterator[R]:
    """Yield ``fn(item)`` in item order, evaluating up to ``workers`` at once.

    When ``stop`` returns true for a result, tasks not yet started are
    cancelled after it is yielded.
    """
    if workers <= 1 or len(items) <= 1:
        for item in items:
            r = fn(item)
            yield r
            if stop is not None and stop(r):
                return
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, item) for item in items]
        try:
            for fut in futures:
                r = fut.result()
                yield r
                if stop is not None and stop(r):
                    return
        finally:
            for fut in futures:
                fut.cancel()


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    return list(run_chunks(fn, list(items), resolve_threads(threads)))
