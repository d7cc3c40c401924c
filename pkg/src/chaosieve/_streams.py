"""Reproducible, splittable uniform sampling on a box.

Sample ``n`` (a row of ``k`` coordinates) is always produced by the same
PCG64 outputs ``n*k .. n*k + k - 1`` of ``PCG64(SeedSequence(seed))``, so the
stream is identical to ``np.random.default_rng(seed).uniform(0, tau, (N, k))``
no matter how the sample range is cut into chunks or spread over workers.
Reductions are always done in chunk order, which makes floating point sums
independent of the worker count.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator, Sequence, TypeVar

import numpy as np

T = TypeVar("T")

CHUNK_SAMPLES = 1 << 15
THREADS_ENV = "CHAOSIEVE_THREADS"


def default_workers() -> int:
    value = os.environ.get(THREADS_ENV)
    if value:
        return max(1, int(value))
    return 1


def chunk_bounds(samples: int, chunk: int = CHUNK_SAMPLES) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk, samples)) for lo in range(0, samples, chunk)]


def uniform_block(seed: int, start: int, stop: int, k: int, high: float) -> np.ndarray:
    """Rows ``start..stop-1`` of the seeded uniform stream on ``[0, high]^k``."""
    bitgen = np.random.PCG64(np.random.SeedSequence(seed))
    bitgen.advance(start * k)
    return np.random.Generator(bitgen).uniform(0.0, high, size=(stop - start, k))


def ordered_map(fn: Callable[..., T], items: Sequence, workers: int | None = None) -> list[T]:
    """``[fn(x) for x in items]``, optionally threaded; output order is preserved."""
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def sample_chunks(
    fn: Callable[[np.ndarray], T],
    seed: int,
    samples: int,
    k: int,
    high: float,
    workers: int | None = None,
    chunk: int = CHUNK_SAMPLES,
) -> list[T]:
    """Apply ``fn`` to every chunk of the stream, results in chunk order."""

    def run(bounds: tuple[int, int]) -> T:
        return fn(uniform_block(seed, bounds[0], bounds[1], k, high))

    return ordered_map(run, chunk_bounds(samples, chunk), workers)


def iter_blocks(n_items: int, n_blocks: int) -> Iterator[range]:
    """Split ``range(n_items)`` into ``n_blocks`` contiguous, near-equal ranges."""
    for i in range(n_blocks):
        yield range(i * n_items // n_blocks, (i + 1) * n_items // n_blocks)
