"""Segmented sieve of Eratosthenes and prime-gap statistics.

The sieve only stores odd candidates.  A segment of ``segment_bytes`` bytes
stands for ``8 * segment_bytes`` consecutive odd numbers (one bit each in the
packed layout; the working buffer is the unpacked boolean view of that block).
Segments are independent, so they can be sieved on several threads; their
partial statistics are merged strictly in segment order.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from ._streams import default_workers, ordered_map
from .errors import CapacityError, DomainError, InsufficientDataError

DEFAULT_SEGMENT_BYTES = 1 << 18
# Sieving primes up to sqrt(limit) are handled in a Python loop, which keeps
# 10**12 workable (hours) but not much beyond.
MAX_LIMIT = 10**12
UINT64_MAX = 2**64 - 1

# Statistics printed for the N = 10**8 run in the source write-up.  They are
# kept as reference text only; the derived values are what the code reports.
REFERENCE_LIMIT = 10**8
REFERENCE_STATS = {
    "limit": REFERENCE_LIMIT,
    "max_gap": 114,
    "min_gap": 1,
    "threshold_percent": {700: 100.00, 180: 100.00, 8: 45.14},
    "top_gaps_order": [6, 2, 4, 12, 8, 10, 14, 18, 16, 20],
}


@dataclass
class PrimeGapSummary:
    limit: int
    prime_count: int
    max_gap: int
    min_gap: int
    threshold_fractions: list[tuple[int, float]]
    top_gaps: list[tuple[int, int]]
    histogram: dict[int, int] = field(default_factory=dict, repr=False)

    @property
    def gap_count(self) -> int:
        return self.prime_count - 1

    def to_dict(self) -> dict:
        return {
            "limit": self.limit,
            "prime_count": self.prime_count,
            "max_gap": self.max_gap,
            "min_gap": self.min_gap,
            "threshold_fractions": [[t, f] for t, f in self.threshold_fractions],
            "top_gaps": [[g, c] for g, c in self.top_gaps],
        }


def _check_limit(limit: int) -> int:
    if isinstance(limit, float):
        if not limit.is_integer():
            raise DomainError(f"limit must be an integer, got {limit!r}")
        limit = int(limit)
    limit = int(limit)
    if limit < 0:
        raise DomainError(f"limit must be non-negative, got {limit}")
    if limit > UINT64_MAX or limit > MAX_LIMIT:
        raise CapacityError(f"limit {limit} exceeds the supported ceiling {MAX_LIMIT}")
    return limit


def _small_odd_primes(bound: int) -> np.ndarray:
    """Odd primes p <= bound by a plain (unsegmented) odd-only sieve."""
    if bound < 3:
        return np.zeros(0, dtype=np.int64)
    size = bound // 2 + 1  # index i <-> 2i+1
    flags = np.ones(size, dtype=bool)
    flags[0] = False
    for i in range(1, (math.isqrt(bound) - 1) // 2 + 1):
        if flags[i]:
            p = 2 * i + 1
            flags[p * p // 2 :: p] = False
    primes = 2 * np.flatnonzero(flags).astype(np.int64) + 1
    return primes[primes <= bound]


def _segment_ranges(limit: int, segment_bytes: int) -> list[tuple[int, int]]:
    if segment_bytes < 1:
        raise DomainError("segment_bytes must be positive")
    span = 8 * segment_bytes
    total = limit // 2  # odd numbers 2g+1 < limit
    return [(g0, min(g0 + span, total)) for g0 in range(0, total, span)]


def _sieve_segment(g0: int, g1: int, base: np.ndarray) -> np.ndarray:
    """Odd primes 2g+1 for g in [g0, g1)."""
    flags = np.ones(g1 - g0, dtype=bool)
    if g0 == 0:
        flags[0] = False  # the number 1
    top = 2 * g1 - 1
    for p in base:
        p = int(p)
        sq = p * p
        if sq > top:
            break
        gp = sq // 2
        if gp >= g0:
            start = gp - g0
        else:
            start = (-(g0 - gp)) % p
        flags[start::p] = False
    return 2 * (g0 + np.flatnonzero(flags).astype(np.int64)) + 1


def iter_prime_segments(
    limit: int, segment_bytes: int = DEFAULT_SEGMENT_BYTES, workers: int | None = None
) -> Iterator[np.ndarray]:
    """Yield the primes below ``limit`` as a sequence of increasing arrays."""
    limit = _check_limit(limit)
    if limit > 2:
        yield np.array([2], dtype=np.int64)
    if limit <= 3:
        return
    base = _small_odd_primes(math.isqrt(limit - 1))
    ranges = _segment_ranges(limit, segment_bytes)
    workers = default_workers() if workers is None else workers
    batch = max(1, 4 * workers)
    for i in range(0, len(ranges), batch):
        part = ranges[i : i + batch]
        yield from ordered_map(lambda r: _sieve_segment(r[0], r[1], base), part, workers)


def enumerate_primes(
    limit: int, segment_bytes: int = DEFAULT_SEGMENT_BYTES, workers: int | None = None
) -> np.ndarray:
    """All primes strictly below ``limit`` as an increasing int64 array.

    >>> enumerate_primes(10).tolist()
    [2, 3, 5, 7]
    """
    chunks = list(iter_prime_segments(limit, segment_bytes, workers))
    if not chunks:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(chunks)


def gap_histogram(
    limit: int, segment_bytes: int = DEFAULT_SEGMENT_BYTES, workers: int | None = None
) -> tuple[int, np.ndarray]:
    """Stream the sieve and tally consecutive-prime gaps.

    Returns ``(prime_count, counts)`` where ``counts[g]`` is the number of
    gaps equal to ``g``.  No full prime list is kept.
    """
    counts = np.zeros(1, dtype=np.int64)
    prime_count = 0
    last = None
    for seg in iter_prime_segments(limit, segment_bytes, workers):
        if seg.size == 0:
            continue
        prime_count += seg.size
        if last is not None:
            gaps = np.diff(seg, prepend=last)
        else:
            gaps = np.diff(seg)
        last = int(seg[-1])
        if gaps.size:
            local = np.bincount(gaps)
            if local.size > counts.size:
                local[: counts.size] += counts
                counts = local
            else:
                counts[: local.size] += local
    return prime_count, counts


def _ranked(counts: np.ndarray, count: int) -> list[tuple[int, int]]:
    gaps = np.flatnonzero(counts)
    # descending frequency, ties by ascending gap
    order = sorted(gaps.tolist(), key=lambda g: (-int(counts[g]), g))
    return [(g, int(counts[g])) for g in order[:count]]


def _summarize(limit: int, prime_count: int, counts: np.ndarray,
               thresholds: Sequence[int], top: int) -> PrimeGapSummary:
    if prime_count < 2:
        raise InsufficientDataError(f"need at least 2 primes below {limit}, found {prime_count}")
    total = prime_count - 1
    nonzero = np.flatnonzero(counts)
    cumulative = np.cumsum(counts)
    fractions = []
    for t in thresholds:
        t = int(t)
        if t <= 0:
            raise DomainError(f"thresholds must be positive, got {t}")
        hit = int(cumulative[min(t, cumulative.size - 1)])
        fractions.append((t, hit / total))
    return PrimeGapSummary(
        limit=limit,
        prime_count=prime_count,
        max_gap=int(nonzero[-1]),
        min_gap=int(nonzero[0]),
        threshold_fractions=fractions,
        top_gaps=_ranked(counts, top),
        histogram={int(g): int(counts[g]) for g in nonzero},
    )


def gap_summary(
    limit: int,
    thresholds: Iterable[int] = (700, 180, 8),
    top: int = 10,
    segment_bytes: int = DEFAULT_SEGMENT_BYTES,
    workers: int | None = None,
) -> PrimeGapSummary:
    limit = _check_limit(limit)
    if limit < 3:
        raise DomainError(f"gap statistics need limit >= 3, got {limit}")
    thresholds = sorted(int(t) for t in thresholds)
    prime_count, counts = gap_histogram(limit, segment_bytes, workers)
    return _summarize(limit, prime_count, counts, thresholds, top)


def top_gap_frequencies(
    limit: int, count: int = 10, segment_bytes: int = DEFAULT_SEGMENT_BYTES,
    workers: int | None = None,
) -> list[tuple[int, int]]:
    """Most frequent gaps below ``limit``, descending by frequency."""
    if count < 1:
        raise DomainError("count must be >= 1")
    limit = _check_limit(limit)
    if limit < 3:
        raise DomainError(f"gap statistics need limit >= 3, got {limit}")
    prime_count, counts = gap_histogram(limit, segment_bytes, workers)
    if prime_count < 2:
        raise InsufficientDataError(f"need at least 2 primes below {limit}")
    return _ranked(counts, count)


def histogram_csv(summary: PrimeGapSummary) -> str:
    """CSV text with header ``gap,count``, rows ascending by gap."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["gap", "count"])
    for gap in sorted(summary.histogram):
        writer.writerow([gap, summary.histogram[gap]])
    return buf.getvalue()


def compare_with_reference(summary: PrimeGapSummary) -> dict:
    """Put the derived statistics next to the N = 10**8 reference printout.

    ``max_gap_discrepancy`` is decidable for any ``limit <= 10**8``: the
    maximal gap is monotone in the limit, so a larger gap found earlier
    already contradicts the reference.  Other fields are compared only when
    the limits coincide.
    """
    ref = REFERENCE_STATS
    same_limit = summary.limit == ref["limit"]
    out = {
        "reference": {
            "limit": ref["limit"],
            "max_gap": ref["max_gap"],
            "min_gap": ref["min_gap"],
            "threshold_percent": {str(t): v for t, v in ref["threshold_percent"].items()},
            "top_gaps_order": ref["top_gaps_order"],
        },
        "computed": {
            "limit": summary.limit,
            "max_gap": summary.max_gap,
            "min_gap": summary.min_gap,
            "threshold_percent": {
                str(t): round(100.0 * f, 2) for t, f in summary.threshold_fractions
            },
            "top_gaps_order": [g for g, _ in summary.top_gaps],
        },
        "same_limit": same_limit,
    }
    flags = {}
    if summary.limit <= ref["limit"]:
        flags["max_gap"] = summary.max_gap > ref["max_gap"] or (
            same_limit and summary.max_gap != ref["max_gap"]
        )
    else:
        flags["max_gap"] = None
    if same_limit:
        computed = out["computed"]["threshold_percent"]
        flags["threshold_percent"] = any(
            str(t) in computed and abs(computed[str(t)] - v) > 0.005
            for t, v in ref["threshold_percent"].items()
        )
        n = len(ref["top_gaps_order"])
        flags["top_gaps_order"] = out["computed"]["top_gaps_order"][:n] != ref["top_gaps_order"]
    else:
        flags["threshold_percent"] = None
        flags["top_gaps_order"] = None
    out["discrepancy"] = flags
    out["any_discrepancy"] = any(bool(v) for v in flags.values())
    return out
