"""Logistic-map dynamics and empirical checks of its invariant density.

All arithmetic is IEEE double precision.  Orbits are chaotic, so individual
iterates are only reproducible bit-for-bit on the same platform; everything
tested here is statistical.

Exceptional starting points (orbits that are eventually constant): 0, 1,
0.5 when r = 4 (it maps to 1 then 0), the fixed point 1 - 1/r, and their
preimages.  ``DEFAULT_Y0`` avoids them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

DEFAULT_R = 3.9
DEFAULT_ITERATIONS = 5
DEFAULT_Y0 = 0.123456789
DEFAULT_BURN_IN = 1000


@dataclass(frozen=True)
class LogisticParams:
    r: float = DEFAULT_R
    iterations: int = DEFAULT_ITERATIONS

    def __post_init__(self):
        if not (0.0 < self.r <= 4.0):
            raise DomainError(f"logistic parameter r must lie in (0, 4], got {self.r}")
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise DomainError(f"iterations must be a positive integer, got {self.iterations}")


@dataclass
class OrbitStats:
    mean: float
    min: float
    max: float
    histogram: list[tuple[float, int]] = field(repr=False)
    eta_margin: float
    degenerate: bool = False
    samples: int = 0


def _check_r(r: float) -> None:
    if not (0.0 < r <= 4.0):
        raise DomainError(f"logistic parameter r must lie in (0, 4], got {r}")


def logistic_step(y: float, r: float = DEFAULT_R) -> float:
    """One application of y -> r*y*(1-y)."""
    _check_r(r)
    if not (0.0 <= y <= 1.0):
        raise DomainError(f"logistic map is defined on [0, 1], got y={y}")
    return r * y * (1.0 - y)


def logistic_iterate(y0: float, params: LogisticParams = LogisticParams()) -> float:
    if not (0.0 <= y0 <= 1.0):
        raise DomainError(f"logistic map is defined on [0, 1], got y={y0}")
    y = y0
    r = params.r
    for _ in range(params.iterations):
        y = r * y * (1.0 - y)
    return y


def logistic_iterate_array(y0: np.ndarray, params: LogisticParams = LogisticParams()) -> np.ndarray:
    """Vectorized ``logistic_iterate``; same operation order, same rounding."""
    y = np.asarray(y0, dtype=float)
    if y.size and (y.min() < 0.0 or y.max() > 1.0):
        raise DomainError("logistic map is defined on [0, 1]")
    r = params.r
    for _ in range(params.iterations):
        y = r * y * (1.0 - y)
    return y


def orbit(y0: float, r: float, n: int) -> np.ndarray:
    """Iterates y_1 .. y_n of the orbit started at y0 (y0 itself excluded).

    Range preservation is checked on every step; a violation means r > 4 or
    a broken float environment and raises.
    """
    _check_r(r)
    if not (0.0 <= y0 <= 1.0):
        raise DomainError(f"logistic map is defined on [0, 1], got y={y0}")
    out = np.empty(n, dtype=float)
    y = float(y0)
    for i in range(n):
        y = r * y * (1.0 - y)
        if not (0.0 <= y <= 1.0):
            raise AssertionError(f"orbit left [0, 1] at step {i + 1}: {y}")
        out[i] = y
    return out


def orbit_statistics(
    y0: float = DEFAULT_Y0,
    r: float = DEFAULT_R,
    n: int = 10**6,
    burn_in: int = DEFAULT_BURN_IN,
    bins: int = 10,
) -> OrbitStats:
    """Statistics over iterates ``burn_in+1 .. n``.

    An orbit that lands exactly on 0 is reported with ``degenerate=True``
    rather than raising.
    """
    if not (n > burn_in >= 0):
        raise DomainError(f"need n > burn_in >= 0, got n={n}, burn_in={burn_in}")
    ys = orbit(y0, r, n)[burn_in:]
    counts, edges = np.histogram(ys, bins=bins, range=(0.0, 1.0))
    lo, hi = float(ys.min()), float(ys.max())
    return OrbitStats(
        mean=float(ys.mean()),
        min=lo,
        max=hi,
        histogram=[(float(e), int(c)) for e, c in zip(edges[:-1], counts)],
        eta_margin=min(lo, 1.0 - hi),
        degenerate=bool(np.any(ys == 0.0)),
        samples=int(ys.size),
    )


def arcsine_bin_masses(bins: int) -> np.ndarray:
    """Mass of the density 1/(pi*sqrt(y(1-y))) on each of ``bins`` equal bins."""
    edges = np.linspace(0.0, 1.0, bins + 1)
    cdf = (2.0 / math.pi) * np.arcsin(np.sqrt(edges))
    cdf[-1] = 1.0
    return np.diff(cdf)


def invariant_density_distance(
    r: float = 4.0,
    n: int = 10**6,
    bins: int = 10,
    y0: float = DEFAULT_Y0,
    burn_in: int = DEFAULT_BURN_IN,
) -> float:
    """Sup distance between empirical bin masses of an orbit and the arcsine law."""
    _check_r(r)
    if bins < 1:
        raise DomainError("bins must be >= 1")
    ys = orbit(y0, r, n + burn_in)[burn_in:]
    counts, _ = np.histogram(ys, bins=bins, range=(0.0, 1.0))
    empirical = counts / counts.sum()
    return float(np.max(np.abs(empirical - arcsine_bin_masses(bins))))
