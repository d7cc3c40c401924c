"""
Maximizing M over symmetric polynomials
=======================================

With F = sum c_a m_a, M(F) is the Rayleigh quotient c'Ac / c'Bc, so the
best F in a basis is the top eigenvector of the pencil (A, B).
"""

import numpy as np

from chaosieve import geometry, optimizer, weights

for d in range(0, 5):
    res = optimizer.maximize_ratio(optimizer.enumerate_basis(6, d))
    print(f"k=6 d={d}: m_opt = {res.m_opt:.6f}  (residual {res.residual:.1e})")

# no random combination beats the eigenvalue
res = optimizer.maximize_ratio(optimizer.enumerate_basis(6, 3))
C = np.random.default_rng(0).normal(size=(10_000, len(res.labels)))
print("best random quotient:", optimizer.rayleigh_quotients(res.gram_I, res.gram_J, C).max())

# the optimal polynomial, in the text format the CLI reads back
print(weights.dumps_polynomial(res.polynomial(), ["k = 6, d = 3 optimum"]))

# on the perturbed polytope, with the normal-CDF weight as an extra direction
spec = geometry.PolytopeSpec(k=6, tau=0.45, delta=0.9)
pert = optimizer.optimize_perturbed(optimizer.enumerate_basis(6, 2), spec, eps=0.1,
                                    samples=200_000, seed=42)
print(pert.sidecar())
