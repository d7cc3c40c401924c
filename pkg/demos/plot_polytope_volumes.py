"""
Volumes of the base and perturbed polytopes
===========================================

R = {t in [0, tau]^k : sum t <= 1} has a closed-form volume by
inclusion-exclusion.  R' relaxes the sum bound to 1 + delta * chi(frac(sum)),
whose volume is estimated by hit-or-miss sampling.
"""

from chaosieve import geometry

spec = geometry.PolytopeSpec(k=6, tau=0.45, delta=0.9)

exact = geometry.exact_base_volume(spec.k, spec.tau)
print(f"exact |R| / tau^k = {exact.box_fraction:.9f}")

# seed 42 with 5e5 samples is the classic toy run; any thread count gives the same draws
rep = geometry.mc_volume(spec, samples=500_000, seed=42)
print(f"MC    |R| / tau^k = {rep.base.box_fraction:.6f} +- {rep.base.fraction_std_error:.1e}"
      f"  ({rep.base.hit_count} points)")
print(f"MC   |R'| / tau^k = {rep.perturbed.box_fraction:.6f}  ({rep.perturbed.hit_count} points)")
print(f"|R'| / |R| = {rep.ratio:.4f}")

ok, lemma = geometry.check_lemma_bound(spec, eps=0.0, samples=500_000, seed=42)
print("volume bound (1 + delta)^k / k! holds:", ok, lemma)
