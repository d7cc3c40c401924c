import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chaosieve.chaos import LogisticParams, logistic_iterate
from chaosieve.errors import DomainError
from chaosieve.geometry import (
    PolytopeSpec,
    check_lemma_bound,
    exact_base_volume,
    exact_base_volume_rational,
    in_base_region,
    in_perturbed_region,
    lemma_volume_bound,
    mc_volume,
    region_masks,
    tau_from_delta,
)
from oracles import box_simplex_volume_irwin_hall

# inclusion-exclusion arithmetic: (1 - 6*0.55^6 + 15*0.1^6) / (720 * 0.45^6)
K6_FRACTION = float((1 - 6 * Fraction(11, 20) ** 6 + 15 * Fraction(1, 10) ** 6)
                    / (720 * Fraction(9, 20) ** 6))


def test_tau_from_delta():
    assert tau_from_delta(0) == 0.125
    assert tau_from_delta(0.3) == pytest.approx(0.2)
    assert tau_from_delta(0.5) == 0.25


def test_base_membership():
    spec = PolytopeSpec(k=6, tau=0.45)
    assert in_base_region(np.zeros(6), spec)
    t = np.zeros(6)
    t[2] = 0.45 + 1e-9
    assert not in_base_region(t, spec)
    assert not in_base_region(np.full(6, 0.2), spec)
    with pytest.raises(DomainError):
        in_base_region(np.zeros(5), spec)


def test_perturbed_membership():
    spec = PolytopeSpec(k=6, tau=0.45, delta=0.9)
    t = np.full(6, 0.18)
    s = float(t.sum())
    expected = s <= 1 + 0.9 * logistic_iterate(s - math.floor(s), LogisticParams())
    assert in_perturbed_region(t, spec) == expected
    assert in_perturbed_region(np.full(6, 0.15), spec)
    flat = PolytopeSpec(k=6, tau=0.45, delta=0.0)
    for t in (np.full(6, 0.18), np.full(6, 0.1), np.full(6, 0.17)):
        assert in_perturbed_region(t, flat) == in_base_region(t, flat)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.floats(0.05, 0.95), st.floats(0.0, 1.0), st.integers(0, 2**31))
def test_containment(k, tau, delta, seed):
    spec = PolytopeSpec(k=k, tau=tau, delta=delta)
    pts = np.random.default_rng(seed).uniform(0, tau, (2000, k))
    in_r, in_rp = region_masks(pts, spec)
    assert not np.any(in_r & ~in_rp)


def test_containment_1e5_points():
    spec = PolytopeSpec()
    pts = np.random.default_rng(3).uniform(0, spec.tau, (10**5, spec.k))
    in_r, in_rp = region_masks(pts, spec)
    assert np.all(in_rp[in_r])
    # scalar and vectorized membership agree
    for p in pts[:300]:
        assert in_base_region(p, spec) == (p.sum() <= 1)
    idx = np.arange(300)
    assert [in_perturbed_region(p, spec) for p in pts[idx]] == in_rp[idx].tolist()


def test_exact_volume_examples():
    v = exact_base_volume(1, 0.5)
    assert v.absolute_volume == 0.5 and v.box_fraction == 1.0
    assert exact_base_volume(4, 1.0).absolute_volume == pytest.approx(1 / 24, rel=1e-15)
    assert exact_base_volume(4, 3.0).absolute_volume == pytest.approx(1 / 24, rel=1e-15)
    assert exact_base_volume(6, Fraction(9, 20)).box_fraction == pytest.approx(K6_FRACTION, abs=1e-15)
    assert exact_base_volume(6, 0.45).box_fraction == pytest.approx(0.1394834307, abs=1e-9)


@pytest.mark.parametrize("k", [2, 3, 5, 6, 9])
@pytest.mark.parametrize("tau", [Fraction(1, 10), Fraction(9, 20), Fraction(2, 3), Fraction(5, 4)])
def test_exact_volume_against_irwin_hall(k, tau):
    assert exact_base_volume_rational(k, tau) == box_simplex_volume_irwin_hall(k, tau)


def test_exact_volume_monotone_and_box_regime():
    taus = np.linspace(0.01, 1.2, 60)
    vols = [exact_base_volume(6, t).absolute_volume for t in taus]
    assert all(b >= a for a, b in zip(vols, vols[1:]))
    assert exact_base_volume(6, 1 / 6).box_fraction == pytest.approx(1.0)
    assert exact_base_volume(5, 0.1).box_fraction == 1.0


def test_mc_volume_listing_stream():
    # seed 42 reproduces the published volume listing exactly
    rep = mc_volume(PolytopeSpec(), 500_000, 42)
    assert rep.base.hit_count == 69_852
    assert rep.perturbed.hit_count == 296_589
    assert rep.ratio == pytest.approx(4.2460, abs=5e-5)
    f = rep.base.box_fraction
    assert rep.base.std_error == pytest.approx(math.sqrt(f * (1 - f) / 500_000) * 0.45**6)
    assert abs(f - K6_FRACTION) <= 3 * rep.base.fraction_std_error


def test_mc_volume_delta_zero():
    rep = mc_volume(PolytopeSpec(delta=0.0), 20_000, 5)
    assert rep.ratio == 1.0


def test_mc_volume_workers_invariant():
    spec = PolytopeSpec(k=5, tau=0.3, delta=0.4)
    a = mc_volume(spec, 100_003, 9, workers=1).to_dict()
    b = mc_volume(spec, 100_003, 9, workers=5).to_dict()
    assert a == b


def test_mc_volume_convergence_over_seeds():
    spec = PolytopeSpec(k=6, tau=0.45, delta=0.9)
    misses = 0
    for seed in range(20):
        rep = mc_volume(spec, 100_000, seed)
        if abs(rep.base.box_fraction - K6_FRACTION) > 4 * rep.base.fraction_std_error:
            misses += 1
    assert misses == 0


def test_mc_volume_errors():
    with pytest.raises(DomainError):
        mc_volume(PolytopeSpec(), 500, 1)


def test_lemma_examples():
    ok, rep = check_lemma_bound(PolytopeSpec(), 0.0, 500_000, 42)
    assert ok and rep["bound"] == pytest.approx(1.9**6 / 720)
    assert rep["vol_Rp"] == pytest.approx(0.00493, abs=5e-5)
    ok, rep = check_lemma_bound(PolytopeSpec(delta=0.0), 0.0, 50_000, 1)
    assert ok and rep["bound"] == pytest.approx(1 / 720)
    ok, rep = check_lemma_bound(PolytopeSpec(), 10.0, 10_000, 1)
    assert ok and rep["bound"] > 1e8
    assert lemma_volume_bound(6, 0.9, 0.1) > lemma_volume_bound(6, 0.9, 0.0)


@pytest.mark.parametrize("k", range(2, 9))
@pytest.mark.parametrize("delta", [0.0, 0.3, 0.9])
@pytest.mark.parametrize("eps", [0.0, 0.1])
def test_lemma_grid(k, delta, eps):
    ok, _ = check_lemma_bound(PolytopeSpec(k=k, tau=0.45, delta=delta), eps, 20_000, 11)
    assert ok
