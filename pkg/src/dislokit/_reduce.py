"""Deterministic blocked evaluation and exact-rounded reduction.

Per-member terms are computed in fixed-size blocks whose boundaries never
depend on the thread count, so every term is produced by the same sequence of
floating point operations regardless of parallelism.  The reduction is
``math.fsum``, which returns the correctly rounded sum of its inputs and is
therefore independent of order and chunking.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

BLOCK = 8192
THREADS_ENV = "DISLOKIT_THREADS"


def resolve_threads(threads=None):
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        threads = int(env) if env else 1
    threads = int(threads)
    if threads < 1:
        raise ValueError(f"thread count must be >= 1, got {threads}")
    return threads


def blocked_map(fn, members, threads=None):
    """Apply ``fn`` to fixed blocks of the ``(n, 2)`` member array, concatenated in order."""
    members = np.asarray(members, dtype=np.int64).reshape(-1, 2)
    n = len(members)
    if n == 0:
        return np.zeros(0)
    blocks = [members[i:i + BLOCK] for i in range(0, n, BLOCK)]
    threads = resolve_threads(threads)
    if threads == 1 or len(blocks) == 1:
        parts = [fn(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(fn, blocks))
    return np.concatenate(parts)


def exact_sum(terms):
    return math.fsum(np.asarray(terms, dtype=float).tolist())
