"""Deterministic partitioned randomness and an order-preserving worker map.

Work is always cut into the same chunks (independent of the worker count),
and chunk ``k`` draws from child stream ``k`` of the root seed, so results are
identical for any number of workers.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

import numpy as np

CHUNK = 1000


def child_seeds(seed: int, n: int) -> list[int]:
    ss = np.random.SeedSequence(seed)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in ss.spawn(n)]


def py_rng(seed: int) -> random.Random:
    return random.Random(seed)


def chunk_sizes(total: int, chunk: int = CHUNK) -> list[int]:
    full, rest = divmod(total, chunk)
    return [chunk] * full + ([rest] if rest else [])


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("HCF_THREADS", "1")))
    except ValueError:
        return 1


def pmap(fn: Callable, jobs: Sequence[tuple], threads: int | None = None) -> list:
    threads = default_threads() if threads is None else threads
    if threads <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, *zip(*jobs)))
