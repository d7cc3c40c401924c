"""Maximize M(F) over spans of monomial symmetric polynomials.

For F = sum_a c_a m_a the ratio is a Rayleigh quotient c'Ac / c'Bc with
A[a, b] = I(m_a m_b) and B[a, b] = sum_j int m_a m_b / (1 - t_j), so the
optimum is the largest eigenvalue of the symmetric-definite pencil (A, B).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np
from scipy import linalg

from ._streams import chunk_bounds, iter_blocks, ordered_map, uniform_block
from .errors import CapacityError, DegenerateInputError, DivergenceError, DomainError, InsufficientSamplesError
from .geometry import MIN_SAMPLES, PolytopeSpec
from .ratio import MIN_HITS, _dirichlet, _pole, region_points
from .weights import Partition, SymmetricPolynomial, monomial_values, orbit_size, placements, rmt_weight_values

EXACT_MAX_DEGREE = 6
EXACT_MAX_K = 12
PD_TOLERANCE = 1e-10
XI = "xi"


def _partitions_of(n: int, max_parts: int, max_part: int | None = None) -> Iterator[Partition]:
    if n == 0:
        yield ()
        return
    if max_parts == 0:
        return
    max_part = n if max_part is None else min(max_part, n)
    for first in range(max_part, 0, -1):
        for rest in _partitions_of(n - first, max_parts - 1, first):
            yield (first,) + rest


@dataclass(frozen=True)
class BasisSpec:
    k: int
    d: int
    partitions: tuple[Partition, ...]

    def __len__(self) -> int:
        return len(self.partitions)


def enumerate_basis(k: int, d: int) -> BasisSpec:
    """Partitions of total degree <= d with at most k parts, graded-lex order.

    >>> enumerate_basis(6, 2).partitions
    ((), (1,), (1, 1), (2,))
    """
    if k < 1 or d < 0:
        raise DomainError(f"need k >= 1 and d >= 0, got k={k}, d={d}")
    parts: list[Partition] = []
    for n in range(d + 1):
        parts.extend(sorted(_partitions_of(n, k)))
    return BasisSpec(k, d, tuple(parts))


@dataclass
class GramMatrices:
    gram_I: np.ndarray
    gram_J: np.ndarray
    labels: list
    mode: str
    exact_I: list[list[Fraction]] | None = field(default=None, repr=False)
    exact_J: list[list[Fraction]] | None = field(default=None, repr=False)
    std_I: np.ndarray | None = field(default=None, repr=False)
    std_J: np.ndarray | None = field(default=None, repr=False)
    hits: int | None = None
    samples: int | None = None
    seed: int | None = None
    # per-block raw sums, kept for the jackknife
    blocks: list[tuple[int, np.ndarray, np.ndarray, np.ndarray]] | None = field(default=None, repr=False)

    def __iter__(self):
        yield self.gram_I
        yield self.gram_J


@lru_cache(maxsize=None)
def _exact_pair(alpha: Partition, beta: Partition, k: int) -> tuple[Fraction, Fraction]:
    # sum over all placement pairs is invariant under permuting coordinates,
    # so fix one placement of the larger orbit and scale by its size
    if orbit_size(alpha, k) < orbit_size(beta, k):
        alpha, beta = beta, alpha
    a0 = placements(alpha, k)[0]
    i_sum = Fraction(0)
    j_sum = Fraction(0)
    for b in placements(beta, k):
        e = tuple(x + y for x, y in zip(a0, b))
        key = tuple(sorted(e))
        i_sum += _dirichlet(key)
        for j in range(k):
            j_sum += _pole(key, e[j])
    n = orbit_size(alpha, k)
    return n * i_sum, n * j_sum


def exact_gram(basis: BasisSpec) -> GramMatrices:
    k = basis.k
    if k < 2:
        raise DivergenceError("J diverges for k = 1")
    if basis.d > EXACT_MAX_DEGREE or k > EXACT_MAX_K:
        raise CapacityError(
            f"exact Gram assembly supports d <= {EXACT_MAX_DEGREE} and k <= {EXACT_MAX_K}"
        )
    parts = basis.partitions
    m = len(parts)
    A = [[Fraction(0)] * m for _ in range(m)]
    B = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            a, b = _exact_pair(parts[i], parts[j], k)
            A[i][j] = A[j][i] = a
            B[i][j] = B[j][i] = b
    return GramMatrices(
        gram_I=np.array([[float(x) for x in row] for row in A]),
        gram_J=np.array([[float(x) for x in row] for row in B]),
        labels=list(parts),
        mode="exact-simplex",
        exact_I=A,
        exact_J=B,
    )


def _design(points: np.ndarray, parts: Sequence[Partition], with_xi: bool) -> np.ndarray:
    cols = [monomial_values(a, points) for a in parts]
    if with_xi:
        cols.append(rmt_weight_values(points))
    return np.column_stack(cols) if cols else np.zeros((points.shape[0], 0))


def mc_gram(
    basis: BasisSpec,
    spec: PolytopeSpec,
    eps: float = 0.0,
    samples: int = 500_000,
    seed: int = 42,
    region: str = "perturbed",
    workers: int | None = None,
) -> GramMatrices:
    """Conditional-mean Gram matrices over R or R' by Monte Carlo.

    With ``eps > 0`` the weight xi is appended as an extra basis column.
    Entries are means over in-region points (integral / region volume).
    """
    if spec.k != basis.k:
        raise DomainError("basis and polytope disagree on k")
    if spec.tau >= 1.0:
        raise DomainError("tau must be < 1")
    if samples < MIN_SAMPLES:
        raise DomainError(f"need at least {MIN_SAMPLES} samples")
    if region not in ("base", "perturbed"):
        raise DomainError(f"unknown region {region!r}")
    with_xi = eps > 0
    parts = basis.partitions

    def chunk(bounds):
        pts = uniform_block(seed, bounds[0], bounds[1], spec.k, spec.tau)
        sel, _ = region_points(pts, spec, region)
        V = _design(sel, parts, with_xi)
        w = (1.0 / (1.0 - sel)).sum(axis=1)
        V2 = V * V
        return (
            sel.shape[0],
            V.T @ V,
            V.T @ (w[:, None] * V),
            V2.T @ V2,
            V2.T @ ((w * w)[:, None] * V2),
            V.sum(axis=0),
        )

    parts_out = ordered_map(chunk, chunk_bounds(samples), workers)
    n = sum(p[0] for p in parts_out)
    if n < MIN_HITS:
        raise InsufficientSamplesError(f"only {n} of {samples} samples fell in the region")
    SI = sum(p[1] for p in parts_out)
    SJ = sum(p[2] for p in parts_out)
    SII = sum(p[3] for p in parts_out)
    SJJ = sum(p[4] for p in parts_out)
    A = SI / n
    B = SJ / n
    labels = list(parts) + ([XI] if with_xi else [])
    return GramMatrices(
        gram_I=A,
        gram_J=B,
        labels=labels,
        mode="mc-" + region,
        std_I=np.sqrt(np.maximum(SII / n - A * A, 0.0) / n),
        std_J=np.sqrt(np.maximum(SJJ / n - B * B, 0.0) / n),
        hits=n,
        samples=samples,
        seed=seed,
        blocks=[(p[0], p[1], p[2], p[5]) for p in parts_out],
    )


def build_gram_matrices(basis: BasisSpec, mode: str = "exact", **mc) -> GramMatrices:
    """``mode="exact"`` or ``mode="mc"`` (keyword arguments go to ``mc_gram``)."""
    if mode in ("exact", "exact-simplex"):
        return exact_gram(basis)
    if mode == "mc":
        return mc_gram(basis, **mc)
    raise DomainError(f"unknown mode {mode!r}")


@dataclass
class EigenResult:
    m_opt: float
    coefficients: np.ndarray
    residual: float
    gram_I: np.ndarray = field(repr=False)
    gram_J: np.ndarray = field(repr=False)
    labels: list = field(default_factory=list, repr=False)
    mode: str = "exact-simplex"
    k: int = 0
    d: int = 0
    std_error: float | None = None
    constrained_ratio: float | None = None
    eps: float | None = None

    def polynomial(self) -> SymmetricPolynomial:
        """The optimal F restricted to its polynomial part (xi dropped)."""
        terms = tuple((a, float(c)) for a, c in zip(self.labels, self.coefficients) if a != XI)
        return SymmetricPolynomial(self.k, terms)

    def sidecar(self) -> dict:
        out = {
            "k": self.k,
            "d": self.d,
            "m_opt": self.m_opt,
            "residual": self.residual,
            "mode": self.mode,
        }
        if self.std_error is not None:
            out["std_error"] = self.std_error
        if self.constrained_ratio is not None:
            out["eps"] = self.eps
            out["constrained_ratio"] = self.constrained_ratio
        if XI in self.labels:
            out["xi_coefficient"] = float(self.coefficients[self.labels.index(XI)])
        return out


def _normalize(c: np.ndarray) -> np.ndarray:
    c = c / np.linalg.norm(c)
    nz = np.flatnonzero(np.abs(c) > 0)
    if nz.size and c[nz[0]] < 0:
        c = -c
    return c


def solve_pencil(A: np.ndarray, B: np.ndarray) -> tuple[float, np.ndarray, float]:
    """Largest eigenpair of A c = lam B c for symmetric A and SPD B.

    B is diagonally equilibrated and Cholesky factored; a pivot below
    ``PD_TOLERANCE`` (relative to the unit diagonal) counts as singular.
    Returns ``(lam, c, residual)`` with c unit length, first nonzero entry
    positive, and residual = ||A c - lam B c|| / ||c||.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise DomainError("Gram matrices must be square and of equal size")
    if not (np.allclose(A, A.T, rtol=1e-12, atol=0) and np.allclose(B, B.T, rtol=1e-12, atol=0)):
        raise DomainError("Gram matrices must be symmetric")
    diag = np.diag(B)
    if np.any(diag <= 0):
        raise DegenerateInputError("gram_J is not positive definite")
    s = 1.0 / np.sqrt(diag)
    As = A * s[:, None] * s[None, :]
    Bs = B * s[:, None] * s[None, :]
    try:
        L = np.linalg.cholesky(Bs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateInputError("gram_J is not positive definite") from exc
    if np.min(np.diag(L)) ** 2 < PD_TOLERANCE:
        raise DegenerateInputError(
            f"gram_J is numerically singular (pivot {np.min(np.diag(L))**2:.3e} < {PD_TOLERANCE})"
        )
    Linv_A = linalg.solve_triangular(L, As, lower=True)
    C = linalg.solve_triangular(L, Linv_A.T, lower=True).T
    C = 0.5 * (C + C.T)
    w, V = np.linalg.eigh(C)
    y = V[:, -1]
    c = s * linalg.solve_triangular(L.T, y, lower=False)
    c = _normalize(c)
    lam = float(c @ A @ c) / float(c @ B @ c)
    residual = float(np.linalg.norm(A @ c - lam * (B @ c)))
    return lam, c, residual


def maximize_ratio(basis: BasisSpec, mode: str | GramMatrices = "exact", **mc) -> EigenResult:
    gram = mode if isinstance(mode, GramMatrices) else build_gram_matrices(basis, mode, **mc)
    lam, c, res = solve_pencil(gram.gram_I, gram.gram_J)
    return EigenResult(
        m_opt=lam,
        coefficients=c,
        residual=res,
        gram_I=gram.gram_I,
        gram_J=gram.gram_J,
        labels=list(gram.labels),
        mode=gram.mode,
        k=basis.k,
        d=basis.d,
    )


def rayleigh_quotients(A: np.ndarray, B: np.ndarray, C: np.ndarray) -> np.ndarray:
    """c'Ac / c'Bc for every row c of ``C``."""
    return np.einsum("ni,ij,nj->n", C, A, C) / np.einsum("ni,ij,nj->n", C, B, C)


def optimize_perturbed(
    basis: BasisSpec,
    spec: PolytopeSpec,
    eps: float = 0.0,
    samples: int = 500_000,
    seed: int = 42,
    workers: int | None = None,
    n_blocks: int = 10,
) -> EigenResult:
    """Optimize over span{m_a} (plus xi when eps > 0) on R' by Monte Carlo.

    The jackknife over ``n_blocks`` contiguous sample blocks gives the
    standard error of m_opt.  ``constrained_ratio`` is the ratio of
    F + eps*xi, where F is the best polynomial-only combination scaled to
    unit mean square on the region and signed so that its mean is positive.
    """
    gram = mc_gram(basis, spec, eps, samples, seed, "perturbed", workers)
    result = maximize_ratio(basis, gram)
    result.eps = eps

    blocks = gram.blocks
    nb = min(n_blocks, len(blocks))
    if nb >= 2:
        agg = []
        for rng_ in iter_blocks(len(blocks), nb):
            agg.append((
                sum(blocks[i][0] for i in rng_),
                sum(blocks[i][1] for i in rng_),
                sum(blocks[i][2] for i in rng_),
            ))
        n_tot = sum(a[0] for a in agg)
        SI = sum(a[1] for a in agg)
        SJ = sum(a[2] for a in agg)
        loo = []
        for n_b, si, sj in agg:
            n_rest = n_tot - n_b
            lam, _, _ = solve_pencil((SI - si) / n_rest, (SJ - sj) / n_rest)
            loo.append(lam)
        loo = np.array(loo)
        result.std_error = float(math.sqrt((nb - 1) / nb * np.sum((loo - loo.mean()) ** 2)))

    if eps > 0:
        m = len(basis.partitions)
        A, B = gram.gram_I, gram.gram_J
        _, c_poly, _ = solve_pencil(A[:m, :m], B[:m, :m])
        means = sum(b[3] for b in blocks) / gram.hits
        if float(c_poly @ means[:m]) < 0:
            c_poly = -c_poly
        c_poly = c_poly / math.sqrt(float(c_poly @ A[:m, :m] @ c_poly))
        full = np.append(c_poly, eps)
        result.constrained_ratio = float(full @ A @ full) / float(full @ B @ full)
    else:
        result.constrained_ratio = result.m_opt
    return result
