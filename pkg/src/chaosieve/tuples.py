"""Admissible k-tuples and a greedy search for narrow ones."""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .errors import DomainError

DEFAULT_BUDGET = 10**4


def _primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).tolist()


def normalize(offsets: Iterable[int]) -> tuple[int, ...]:
    """Validate a tuple of offsets: must be strictly increasing integers."""
    out = tuple(int(h) for h in offsets)
    if any(b <= a for a, b in zip(out, out[1:])):
        raise DomainError(f"offsets must be strictly increasing: {out}")
    return out


def is_admissible(offsets: Iterable[int]) -> bool:
    """True iff for every prime p <= k the offsets miss some residue class mod p."""
    h = normalize(offsets)
    k = len(h)
    for p in _primes_upto(k):
        if len({x % p for x in h}) == p:
            return False
    return True


def diameter(offsets: Iterable[int]) -> int:
    h = normalize(offsets)
    if not h:
        raise DomainError("empty tuple has no diameter")
    return h[-1] - h[0]


def _greedy_survivors(lo: int, width: int, primes: list[int]) -> np.ndarray:
    """Integers in [lo, lo+width) left after removing, for each prime in turn,
    its least-populated residue class among the current survivors."""
    alive = np.arange(lo, lo + width, dtype=np.int64)
    for p in primes:
        counts = np.bincount(alive % p, minlength=p)
        # fewest exclusions; ties go to the smallest residue
        r = int(np.argmin(counts))
        alive = alive[alive % p != r]
    return alive


def _best_window(alive: np.ndarray, k: int) -> tuple[int, ...] | None:
    if alive.size < k:
        return None
    spans = alive[k - 1 :] - alive[: alive.size - k + 1]
    i = int(np.argmin(spans))
    return tuple(int(x) for x in alive[i : i + k])


def narrowest_tuple(k: int, budget: int = DEFAULT_BUDGET) -> tuple[int, ...]:
    """Search for an admissible k-tuple of small diameter.

    Each unit of ``budget`` examines one candidate interval ``[lo, lo+W)``:
    greedy residue sieving over it, then the narrowest run of k consecutive
    survivors.  Starting points ``lo`` sweep ``0, -1, 1, -2, 2, ...`` up to the
    budget, and the width ``W`` grows until survivors suffice.  The result is
    translated to start at 0 and is deterministic for fixed ``(k, budget)``.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if k == 1:
        return (0,)
    budget = max(1, int(budget))
    primes = _primes_upto(k)
    width = max(2 * k, int(2 * k * math.log(k)) + 2)
    best: tuple[int, ...] | None = None
    examined = 0
    step = 0
    while examined < budget:
        lo = (step + 1) // 2 * (1 if step % 2 else -1)
        alive = _greedy_survivors(lo, width, primes)
        examined += 1
        cand = _best_window(alive, k)
        if cand is None:
            width *= 2
            step = 0
            continue
        if best is None or cand[-1] - cand[0] < best[-1] - best[0]:
            best = cand
        step += 1
        # once any tuple is known, no interval wider than needed is useful
        width = min(width, 2 * (best[-1] - best[0]) + 1)
        if step > 2 * width:
            break
    assert best is not None
    return tuple(x - best[0] for x in best)


def exhaustive_narrowest(k: int, span: int) -> tuple[int, ...] | None:
    """Brute force: the admissible k-tuple in [0, span] starting at 0 with the
    least diameter (lexicographically first among ties).  Only for small k."""
    from itertools import combinations

    if k == 1:
        return (0,)
    best = None
    for rest in combinations(range(1, span + 1), k - 1):
        t = (0,) + rest
        if best is not None and t[-1] >= best[-1]:
            continue
        if is_admissible(t):
            best = t
    return best
