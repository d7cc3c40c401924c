"""
Heuristic formulas for perturbed ratios and gaps
================================================

Closed-form calculators only.  The worked examples they are checked
against do not all agree with the formulas; those are listed as divergent.
"""

from chaosieve import predictor

print(predictor.m_prime_asymptotic(30, 0.3, 0.1))
print(predictor.gap_ansatz(28, 0.3, 0.1))
print(predictor.conjecture_bound(0.3, 0.1))

for claim in predictor.worked_example_claims():
    computed = "none" if claim["computed"] is None else f"{claim['computed']:.4f}"
    flag = "DIVERGES" if claim["diverges"] else "ok"
    print(f"{claim['claim']:<42} quoted {claim['quoted']:<6} computed {computed:<8} {flag}")
