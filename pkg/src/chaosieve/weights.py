"""Symmetric polynomial test functions and the normal-CDF product weight.

A partition (a_1 >= a_2 >= ... > 0) names the monomial symmetric polynomial
m_a(t) = sum of t^e over the distinct rearrangements e of (a_1, ..., 0, ..., 0)
in k variables.  ``SymmetricPolynomial`` is a sparse linear combination of
these; ``PerturbedFunction`` adds ``eps * xi(t)`` with xi(t) = prod Phi(t_j).
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np
from scipy.special import ndtr

from .errors import DomainError

Partition = tuple[int, ...]


def make_partition(parts: Iterable[int]) -> Partition:
    parts = tuple(sorted((int(a) for a in parts), reverse=True))
    if any(a <= 0 for a in parts):
        raise DomainError(f"partition parts must be positive: {parts}")
    return parts


@lru_cache(maxsize=None)
def placements(alpha: Partition, k: int) -> tuple[tuple[int, ...], ...]:
    """All distinct exponent vectors of length k that rearrange alpha (zero padded).

    Count is k! / prod(multiplicity!) over the padded multiset.
    """
    if len(alpha) > k:
        raise DomainError(f"partition {alpha} has more than k={k} parts")
    padded = Counter(alpha)
    padded[0] += k - len(alpha)
    values = sorted(padded)
    out: list[tuple[int, ...]] = []
    cur = [0] * k

    def rec(pos: int) -> None:
        if pos == k:
            out.append(tuple(cur))
            return
        for v in values:
            if padded[v]:
                padded[v] -= 1
                cur[pos] = v
                rec(pos + 1)
                padded[v] += 1

    rec(0)
    return tuple(out)


def orbit_size(alpha: Partition, k: int) -> int:
    mult = Counter(alpha)
    mult[0] += k - len(alpha)
    size = math.factorial(k)
    for m in mult.values():
        size //= math.factorial(m)
    return size


def eval_monomial_symmetric(alpha: Iterable[int], t) -> float:
    t = np.asarray(t, dtype=float)
    alpha = make_partition(alpha)
    return float(monomial_values(alpha, t[None, :])[0])


def monomial_values(alpha: Partition, points: np.ndarray) -> np.ndarray:
    """m_alpha evaluated at every row of ``points`` (shape (n, k))."""
    n, k = points.shape
    if not alpha:
        return np.ones(n)
    top = alpha[0]
    powers = [np.ones_like(points)]
    for _ in range(top):
        powers.append(powers[-1] * points)
    total = np.zeros(n)
    cols = np.arange(k)
    for e in placements(alpha, k):
        e = np.asarray(e)
        nz = cols[e > 0]
        term = powers[e[nz[0]]][:, nz[0]].copy()
        for c in nz[1:]:
            term *= powers[e[c]][:, c]
        total += term
    return total


@dataclass(frozen=True)
class SymmetricPolynomial:
    k: int
    terms: tuple[tuple[Partition, float], ...]

    def __post_init__(self):
        seen = set()
        for alpha, _ in self.terms:
            if alpha in seen:
                raise DomainError(f"duplicate partition {alpha}")
            if len(alpha) > self.k:
                raise DomainError(f"partition {alpha} has more than k={self.k} parts")
            seen.add(alpha)

    @classmethod
    def from_dict(cls, k: int, coeffs: Mapping[Iterable[int], float]) -> "SymmetricPolynomial":
        merged: dict[Partition, float] = {}
        for alpha, c in coeffs.items():
            alpha = make_partition(alpha)
            merged[alpha] = merged.get(alpha, 0.0) + c
        return cls(k, tuple(sorted(merged.items(), key=lambda x: (sum(x[0]), x[0]))))

    @classmethod
    def constant(cls, k: int, value: float = 1.0) -> "SymmetricPolynomial":
        return cls(k, (((), value),))

    @property
    def degree(self) -> int:
        return max((sum(a) for a, c in self.terms if c != 0), default=0)

    def is_zero(self) -> bool:
        return all(c == 0 for _, c in self.terms)

    def scaled(self, factor: float) -> "SymmetricPolynomial":
        return SymmetricPolynomial(self.k, tuple((a, c * factor) for a, c in self.terms))

    def values(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.k:
            raise DomainError(f"expected points of shape (n, {self.k}), got {points.shape}")
        total = np.zeros(points.shape[0])
        for alpha, c in self.terms:
            if c:
                total += c * monomial_values(alpha, points)
        return total


def eval_poly(F: SymmetricPolynomial, t) -> float:
    t = np.asarray(t, dtype=float)
    if t.shape != (F.k,):
        raise DomainError(f"expected a point of length {F.k}, got shape {t.shape}")
    return float(F.values(t[None, :])[0])


def normal_cdf(u):
    """Standard normal CDF, via the complementary error function (scipy ``ndtr``)."""
    out = ndtr(u)
    return float(out) if np.ndim(out) == 0 else out


def rmt_weight(t) -> float:
    """xi(t) = prod_j Phi(t_j)."""
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or t.size < 1:
        raise DomainError("rmt_weight needs a non-empty point")
    return float(np.prod(ndtr(t)))


def rmt_weight_values(points: np.ndarray) -> np.ndarray:
    return np.prod(ndtr(points), axis=1)


WEIGHTS = {"normal_cdf_product": rmt_weight_values}


@dataclass(frozen=True)
class PerturbedFunction:
    base: SymmetricPolynomial
    eps: float = 0.0
    weight: str = "normal_cdf_product"

    def __post_init__(self):
        if self.eps < 0:
            raise DomainError(f"eps must be non-negative, got {self.eps}")
        if self.weight not in WEIGHTS:
            raise DomainError(f"unknown weight {self.weight!r}")

    @property
    def k(self) -> int:
        return self.base.k

    def values(self, points: np.ndarray) -> np.ndarray:
        out = self.base.values(points)
        if self.eps:
            out = out + self.eps * WEIGHTS[self.weight](points)
        return out


def eval_perturbed(Fp: PerturbedFunction, t) -> float:
    t = np.asarray(t, dtype=float)
    if t.shape != (Fp.k,):
        raise DomainError(f"expected a point of length {Fp.k}, got shape {t.shape}")
    return float(Fp.values(t[None, :])[0])


# -- text serialization ------------------------------------------------------
#
#   # comment
#   k = 6
#   1.0:
#   -0.25: 1
#   0.5: 2,1

def dumps_polynomial(F: SymmetricPolynomial, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"k = {F.k}")
    for alpha, c in F.terms:
        lines.append(f"{c!r}: {','.join(str(a) for a in alpha)}".rstrip())
    return "\n".join(lines) + "\n"


def loads_polynomial(text: str, k: int | None = None) -> SymmetricPolynomial:
    coeffs: dict[Partition, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("k") and "=" in line:
            k_file = int(line.split("=", 1)[1])
            if k is not None and k != k_file:
                raise DomainError(f"polynomial is for k={k_file}, expected k={k}")
            k = k_file
            continue
        if ":" not in line:
            raise DomainError(f"line {lineno}: expected 'coefficient: parts'")
        c, parts = line.split(":", 1)
        parts = parts.strip()
        alpha = make_partition(int(p) for p in parts.split(",")) if parts else ()
        if alpha in coeffs:
            raise DomainError(f"line {lineno}: duplicate partition {alpha}")
        coeffs[alpha] = float(c)
    if k is None:
        raise DomainError("number of variables k not given")
    return SymmetricPolynomial.from_dict(k, coeffs)
