"""Base polytope R, its chaos-perturbed enlargement R', and their volumes.

R  = {t in [0, tau]^k : sum(t) <= 1}
R' = {t in [0, tau]^k : sum(t) <= 1 + delta * chi(frac(sum(t)))}

where chi is the logistic map iterated ``logistic.iterations`` times.
Monte Carlo volumes sample uniformly on the box [0, tau]^k using the seeded
splittable stream of ``chaosieve._streams``; with the defaults this is the
same stream as ``np.random.default_rng(seed).uniform(0, tau, (N, k))``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from ._streams import sample_chunks
from .chaos import LogisticParams, logistic_iterate, logistic_iterate_array
from .errors import DomainError, InsufficientSamplesError

MIN_SAMPLES = 10**3


@dataclass(frozen=True)
class PolytopeSpec:
    k: int = 6
    tau: float = 0.45
    delta: float = 0.9
    logistic: LogisticParams = field(default_factory=LogisticParams)

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise DomainError(f"k must be a positive integer, got {self.k}")
        if not (0.0 < self.tau):
            raise DomainError(f"tau must be positive, got {self.tau}")
        if self.delta < 0:
            raise DomainError(f"delta must be non-negative, got {self.delta}")


@dataclass
class VolumeEstimate:
    box_fraction: float
    absolute_volume: float
    hit_count: int
    samples: int
    std_error: float  # of absolute_volume

    @property
    def fraction_std_error(self) -> float:
        return math.sqrt(self.box_fraction * (1.0 - self.box_fraction) / self.samples) if self.samples else 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def tau_from_delta(delta: float) -> float:
    """Box cap (1/2 + delta)/4 tied to the distribution level 1/2 + delta."""
    if delta < 0:
        raise DomainError("delta must be non-negative")
    return (0.5 + delta) / 4.0


def _point(t, spec: PolytopeSpec) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if t.shape != (spec.k,):
        raise DomainError(f"expected a point of length {spec.k}, got shape {t.shape}")
    return t


def in_base_region(t, spec: PolytopeSpec) -> bool:
    t = _point(t, spec)
    return bool(np.all((t >= 0.0) & (t <= spec.tau)) and t.sum() <= 1.0)


def perturbed_bound(sums: np.ndarray, spec: PolytopeSpec) -> np.ndarray:
    """Right-hand side 1 + delta*chi(frac(sum)) for an array of coordinate sums."""
    frac = sums - np.floor(sums)
    return 1.0 + spec.delta * logistic_iterate_array(frac, spec.logistic)


def in_perturbed_region(t, spec: PolytopeSpec) -> bool:
    t = _point(t, spec)
    if not np.all((t >= 0.0) & (t <= spec.tau)):
        return False
    s = float(t.sum())
    return s <= 1.0 + spec.delta * logistic_iterate(s - math.floor(s), spec.logistic)


def region_masks(points: np.ndarray, spec: PolytopeSpec) -> tuple[np.ndarray, np.ndarray]:
    """Membership masks (in R, in R') for points already inside the box."""
    sums = points.sum(axis=1)
    in_r = sums <= 1.0
    if spec.delta == 0:
        return in_r, in_r.copy()
    return in_r, sums <= perturbed_bound(sums, spec)


def exact_base_volume_rational(k: int, tau) -> Fraction:
    """|R| as an exact rational when tau is rational (floats are taken at face value)."""
    tau = Fraction(tau)
    total = Fraction(0)
    for j in range(k + 1):
        rest = 1 - j * tau
        if rest <= 0:
            break
        total += (-1) ** j * math.comb(k, j) * rest**k
    return total / math.factorial(k)


def exact_base_volume(k: int, tau: float) -> VolumeEstimate:
    """Inclusion-exclusion volume of {t in [0,tau]^k : sum(t) <= 1}."""
    if k < 1 or tau <= 0:
        raise DomainError("need k >= 1 and tau > 0")
    vol = exact_base_volume_rational(k, tau)
    box = Fraction(tau) ** k
    return VolumeEstimate(
        box_fraction=float(vol / box),
        absolute_volume=float(vol),
        hit_count=0,
        samples=0,
        std_error=0.0,
    )


def _estimate(hits: int, samples: int, box: float) -> VolumeEstimate:
    f = hits / samples
    return VolumeEstimate(
        box_fraction=f,
        absolute_volume=f * box,
        hit_count=hits,
        samples=samples,
        std_error=math.sqrt(f * (1.0 - f) / samples) * box,
    )


@dataclass
class VolumeReport:
    spec: PolytopeSpec
    seed: int
    base: VolumeEstimate
    perturbed: VolumeEstimate
    ratio: float

    def to_dict(self) -> dict:
        return {
            "k": self.spec.k,
            "tau": self.spec.tau,
            "delta": self.spec.delta,
            "iterations": self.spec.logistic.iterations,
            "r": self.spec.logistic.r,
            "samples": self.base.samples,
            "seed": self.seed,
            "vol_R": self.base.absolute_volume,
            "vol_Rp": self.perturbed.absolute_volume,
            "fraction_R": self.base.box_fraction,
            "fraction_Rp": self.perturbed.box_fraction,
            "hits_R": self.base.hit_count,
            "hits_Rp": self.perturbed.hit_count,
            "ratio": self.ratio,
            "std_errors": {
                "vol_R": self.base.std_error,
                "vol_Rp": self.perturbed.std_error,
            },
        }


def mc_volume(spec: PolytopeSpec, samples: int = 500_000, seed: int = 42,
              workers: int | None = None) -> VolumeReport:
    """Hit-or-miss volumes of R and R' and their ratio |R'|/|R|."""
    if samples < MIN_SAMPLES:
        raise DomainError(f"need at least {MIN_SAMPLES} samples, got {samples}")

    def count(points: np.ndarray) -> tuple[int, int]:
        in_r, in_rp = region_masks(points, spec)
        return int(in_r.sum()), int(in_rp.sum())

    parts = sample_chunks(count, seed, samples, spec.k, spec.tau, workers)
    hits_r = sum(p[0] for p in parts)
    hits_rp = sum(p[1] for p in parts)
    if hits_r == 0:
        raise InsufficientSamplesError("no samples fell in R; volume ratio undefined")
    box = spec.tau**spec.k
    return VolumeReport(spec, seed, _estimate(hits_r, samples, box),
                        _estimate(hits_rp, samples, box), hits_rp / hits_r)


def lemma_volume_bound(k: int, delta: float, eps: float) -> float:
    """(1 + delta)^k / k! * exp(eps * sqrt(k))."""
    return (1.0 + delta) ** k / math.factorial(k) * math.exp(eps * math.sqrt(k))


def check_lemma_bound(spec: PolytopeSpec, eps: float = 0.0, samples: int = 500_000,
                      seed: int = 42, workers: int | None = None) -> tuple[bool, dict]:
    """Test |R'| <= (1+delta)^k/k! * e^{eps sqrt k}, allowing 3 standard errors."""
    rep = mc_volume(spec, samples, seed, workers)
    bound = lemma_volume_bound(spec.k, spec.delta, eps)
    est = rep.perturbed.absolute_volume
    lower = est - 3.0 * rep.perturbed.std_error
    ok = lower <= bound
    return ok, {
        "vol_Rp": est,
        "std_error": rep.perturbed.std_error,
        "bound": bound,
        "eps": eps,
        "holds": ok,
    }
