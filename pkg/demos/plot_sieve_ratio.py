"""
The sieve ratio M(F) = I(F) / J(F)
==================================

Exact rational values on the full simplex from Dirichlet integrals, and
Monte Carlo values over the truncated and perturbed polytopes.
"""

from chaosieve import geometry, ratio, weights

# F = 1 gives (k - 1) / k^2 exactly
for k in (2, 4, 6, 10):
    r = ratio.exact_ratio(weights.SymmetricPolynomial.constant(k))
    print(f"k={k:2d}  M(1) = {r.exact['M']}")

# a polynomial test function: 1 - 0.5 m_(1) + 0.25 m_(1,1)
F = weights.SymmetricPolynomial.from_dict(6, {(): 1.0, (1,): -0.5, (1, 1): 0.25})
print("exact M(F) =", ratio.exact_ratio(F).M)

# with tau close to 1 and no perturbation, Monte Carlo agrees with the exact value
near = geometry.PolytopeSpec(k=6, tau=0.999, delta=0.0)
mc = ratio.mc_ratio(F, near, "base", samples=10**6, seed=1)
print(f"MC    M(F) = {mc.M:.5f} +- {mc.std_error:.1e}")

# the toy configuration: the perturbed region *lowers* M for F = 1
spec = geometry.PolytopeSpec(k=6, tau=0.45, delta=0.9)
one = weights.PerturbedFunction(weights.SymmetricPolynomial.constant(6), eps=0.0)
base = ratio.mc_ratio(one, spec, "base")
pert = ratio.mc_ratio(one, spec, "perturbed")
print(f"M over R = {base.M:.5f}, over R' = {pert.M:.5f}, change {100 * (pert.M / base.M - 1):+.2f}%")

# adding eps * prod Phi(t_j)
bumped = weights.PerturbedFunction(weights.SymmetricPolynomial.constant(6), eps=0.1)
print(f"eps = 0.1 over R': {ratio.mc_ratio(bumped, spec, 'perturbed').M:.5f}")
