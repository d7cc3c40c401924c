"""The sieve ratio M(F) = I(F) / J(F).

    I(F) = int F(t)^2 dt,   J(F) = sum_j int F(t)^2 / (1 - t_j) dt

Two evaluation modes:

* ``exact_ratio`` integrates over the full simplex {t >= 0, sum t <= 1} in
  exact rational arithmetic, expanding F^2 into monomials and using the
  Dirichlet integral and its 1/(1 - t_j) variant termwise.
* ``mc_ratio`` integrates over R or R' (box-truncated, possibly perturbed) by
  conditional means over uniformly sampled in-region points.  The common
  region-volume factor cancels from the ratio.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from ._streams import sample_chunks
from .errors import DegenerateInputError, DivergenceError, DomainError, InsufficientSamplesError
from .geometry import MIN_SAMPLES, PolytopeSpec, region_masks
from .weights import PerturbedFunction, SymmetricPolynomial, placements

MIN_HITS = 100


@lru_cache(maxsize=None)
def _dirichlet(sorted_exponents: tuple[int, ...]) -> Fraction:
    k = len(sorted_exponents)
    num = math.prod(math.factorial(a) for a in sorted_exponents)
    return Fraction(num, math.factorial(k + sum(sorted_exponents)))


def simplex_monomial_integral(exponents: Sequence[int]) -> Fraction:
    """int over the unit simplex of prod t_i^a_i = prod(a_i!) / (k + sum a)!"""
    a = tuple(int(x) for x in exponents)
    if not a or min(a) < 0:
        raise DomainError("exponents must be a non-empty list of non-negative integers")
    return _dirichlet(tuple(sorted(a)))


@lru_cache(maxsize=None)
def _pole(sorted_exponents: tuple[int, ...], a_j: int) -> Fraction:
    # integrate the other k-1 coordinates over the simplex scaled by (1 - t_j),
    # leaving a Beta integral in t_j
    k = len(sorted_exponents)
    total = sum(sorted_exponents)
    rest = total - a_j
    num = math.prod(math.factorial(a) for a in sorted_exponents)
    return Fraction(num, (rest + k - 1) * math.factorial(total + k - 1))


def simplex_monomial_integral_with_pole(exponents: Sequence[int], j: int) -> Fraction:
    """int over the unit simplex of prod t_i^a_i / (1 - t_j)."""
    a = tuple(int(x) for x in exponents)
    if not a or min(a) < 0:
        raise DomainError("exponents must be a non-empty list of non-negative integers")
    if len(a) < 2:
        raise DivergenceError("int_0^1 t^a / (1 - t) dt diverges (k = 1)")
    if not 0 <= j < len(a):
        raise DomainError(f"coordinate index {j} out of range for k={len(a)}")
    return _pole(tuple(sorted(a)), a[j])


@dataclass
class RatioReport:
    I: float
    J_components: list[float]
    J: float
    M: float
    method: str
    samples: int | None = None
    seed: int | None = None
    std_error: float | None = None
    hits: int | None = None
    exact: dict[str, Fraction] | None = field(default=None, repr=False)

    @property
    def m_floor(self) -> int:
        """Largest integer strictly below M."""
        return math.ceil(self.M) - 1

    def to_dict(self) -> dict:
        out = {
            "I": self.I,
            "J_components": list(self.J_components),
            "J": self.J,
            "M": self.M,
            "m_floor": self.m_floor,
            "method": self.method,
        }
        if self.method != "exact-simplex":
            out.update(samples=self.samples, seed=self.seed, std_error=self.std_error,
                       hits=self.hits)
        if self.exact is not None:
            out["exact"] = {key: f"{v.numerator}/{v.denominator}" for key, v in self.exact.items()}
        return out


def _add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def exact_ratio(F: SymmetricPolynomial) -> RatioReport:
    """M(F) on the untruncated simplex, in exact rational arithmetic.

    Coefficients are converted with ``Fraction`` (exactly, floats included).
    Every J_j is accumulated separately over all pairs of exponent
    placements, so the equality of the components is an actual check of
    symmetry rather than an assumption.
    """
    k = F.k
    if k < 2:
        raise DivergenceError("J(F) diverges for k = 1")
    terms = [(alpha, Fraction(c)) for alpha, c in F.terms if c != 0]
    if not terms:
        raise DegenerateInputError("F is identically zero")
    I = Fraction(0)
    J = [Fraction(0)] * k
    for ia, (alpha, ca) in enumerate(terms):
        for ib in range(ia, len(terms)):
            beta, cb = terms[ib]
            w = ca * cb * (1 if ia == ib else 2)
            i_sum = Fraction(0)
            j_sum = [Fraction(0)] * k
            for a in placements(alpha, k):
                for b in placements(beta, k):
                    e = _add(a, b)
                    key = tuple(sorted(e))
                    i_sum += _dirichlet(key)
                    for j in range(k):
                        j_sum[j] += _pole(key, e[j])
            I += w * i_sum
            for j in range(k):
                J[j] += w * j_sum[j]
    J_total = sum(J)
    M = I / J_total
    return RatioReport(
        I=float(I),
        J_components=[float(x) for x in J],
        J=float(J_total),
        M=float(M),
        method="exact-simplex",
        exact={"I": I, "J": J_total, "M": M},
    )


def _check_mc(spec: PolytopeSpec, samples: int, region: str) -> None:
    if region not in ("base", "perturbed"):
        raise DomainError(f"region must be 'base' or 'perturbed', got {region!r}")
    if spec.tau >= 1.0:
        raise DomainError("tau must be < 1: 1/(1 - t_j) is unbounded on the box otherwise")
    if samples < MIN_SAMPLES:
        raise DomainError(f"need at least {MIN_SAMPLES} samples, got {samples}")


class _Moments:
    """Running sums for the ratio-of-means estimator, mergeable in order."""

    def __init__(self, k: int):
        self.n = 0
        self.sx = 0.0
        self.sy = np.zeros(k)
        self.sxx = 0.0
        self.syy = 0.0
        self.sxy = 0.0

    def add(self, x: np.ndarray, y: np.ndarray) -> None:
        ytot = y.sum(axis=1)
        self.n += x.size
        self.sx += float(x.sum())
        self.sy += y.sum(axis=0)
        self.sxx += float(x @ x)
        self.syy += float(ytot @ ytot)
        self.sxy += float(x @ ytot)

    def merge(self, other: "_Moments") -> None:
        self.n += other.n
        self.sx += other.sx
        self.sy += other.sy
        self.sxx += other.sxx
        self.syy += other.syy
        self.sxy += other.sxy


def region_points(points: np.ndarray, spec: PolytopeSpec, region: str) -> tuple[np.ndarray, np.ndarray]:
    """In-region subset of ``points`` and, for each, whether it also lies in R."""
    in_r, in_rp = region_masks(points, spec)
    mask = in_r if region == "base" else in_rp
    return points[mask], in_r[mask]


def mc_ratio(
    Fp: PerturbedFunction | SymmetricPolynomial,
    spec: PolytopeSpec,
    region: str = "base",
    samples: int = 500_000,
    seed: int = 42,
    workers: int | None = None,
    support: str = "region",
) -> RatioReport:
    """Monte Carlo M(F') over R (``region="base"``) or R' (``"perturbed"``).

    ``support="region"`` keeps F' on the whole sampled region.  ``"base"``
    zeroes F' outside R, which makes the R' estimate coincide with the R one
    up to sampling noise; it exists for comparison only.
    """
    if isinstance(Fp, SymmetricPolynomial):
        Fp = PerturbedFunction(Fp, 0.0)
    if Fp.k != spec.k:
        raise DomainError(f"function has k={Fp.k}, polytope has k={spec.k}")
    if support not in ("region", "base"):
        raise DomainError(f"support must be 'region' or 'base', got {support!r}")
    _check_mc(spec, samples, region)
    k = spec.k

    def moments(points: np.ndarray) -> _Moments:
        sel, in_r = region_points(points, spec, region)
        f = Fp.values(sel)
        if support == "base":
            f = np.where(in_r, f, 0.0)
        x = f * f
        m = _Moments(k)
        m.add(x, x[:, None] / (1.0 - sel))
        return m

    total = _Moments(k)
    for part in sample_chunks(moments, seed, samples, k, spec.tau, workers):
        total.merge(part)
    n = total.n
    if n < MIN_HITS:
        raise InsufficientSamplesError(f"only {n} of {samples} samples fell in the region")
    I = total.sx / n
    Jc = total.sy / n
    J = float(Jc.sum())
    if J == 0.0:
        raise DegenerateInputError("F' vanishes on every sampled point")
    M = I / J
    var_x = total.sxx / n - I * I
    var_y = total.syy / n - J * J
    cov = total.sxy / n - I * J
    var_m = max(var_x - 2.0 * M * cov + M * M * var_y, 0.0) / (n * J * J)
    return RatioReport(
        I=I,
        J_components=[float(v) for v in Jc],
        J=J,
        M=M,
        method="mc-base" if region == "base" else "mc-perturbed",
        samples=samples,
        seed=seed,
        std_error=math.sqrt(var_m),
        hits=n,
    )


def verify_pole_formula(n_vectors: int = 5, samples: int = 400_000, seed: int = 7,
                        k_range: tuple[int, int] = (4, 6), max_exp: int = 3) -> list[dict]:
    """Compare the closed-form pole integral with plain Monte Carlo on the simplex.

    Points are drawn uniformly on the simplex (sorted-uniform spacings), so
    the integral is E[f] / k!.  Returns one record per random exponent vector.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n_vectors):
        k = int(rng.integers(k_range[0], k_range[1] + 1))
        a = rng.integers(0, max_exp + 1, size=k)
        j = int(rng.integers(0, k))
        # first k spacings of k+1 sorted uniforms: uniform on the simplex
        u = np.sort(rng.random((samples, k)), axis=1)
        t = np.diff(u, axis=1, prepend=0.0)
        f = np.prod(t**a, axis=1) / (1.0 - t[:, j])
        vol = 1.0 / math.factorial(k)
        est = float(f.mean()) * vol
        err = float(f.std(ddof=1)) / math.sqrt(samples) * vol
        exact = float(simplex_monomial_integral_with_pole(a.tolist(), j))
        out.append({"exponents": a.tolist(), "j": j, "exact": exact, "mc": est, "std_error": err})
    return out
