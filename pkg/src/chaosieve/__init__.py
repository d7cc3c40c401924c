"""Chaos-perturbed sieve ratios, polytope volumes and prime-gap statistics."""
from .chaos import LogisticParams, logistic_iterate, logistic_step, orbit_statistics, invariant_density_distance
from .errors import (
    CapacityError,
    ChaosieveError,
    DegenerateInputError,
    DivergenceError,
    DomainError,
    InsufficientDataError,
    InsufficientSamplesError,
)
from .geometry import PolytopeSpec, VolumeEstimate, check_lemma_bound, exact_base_volume, mc_volume, tau_from_delta
from .optimizer import BasisSpec, EigenResult, build_gram_matrices, enumerate_basis, maximize_ratio, optimize_perturbed
from .predictor import conjecture_bound, extrapolate_m, gap_ansatz, m_prime_asymptotic, min_k_for_level, predict
from .primes import PrimeGapSummary, enumerate_primes, gap_summary, top_gap_frequencies
from .ratio import RatioReport, exact_ratio, mc_ratio, simplex_monomial_integral, simplex_monomial_integral_with_pole
from .tuples import diameter, is_admissible, narrowest_tuple
from .weights import PerturbedFunction, SymmetricPolynomial, eval_perturbed, eval_poly, normal_cdf, rmt_weight

__version__ = "0.1.0"
