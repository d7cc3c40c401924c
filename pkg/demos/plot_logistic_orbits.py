"""
Logistic-map orbits and the arcsine law
=======================================

At r = 4 the logistic map is ergodic with invariant density
1 / (pi * sqrt(y (1 - y))).  At r = 3.9 the attractor sits inside
[r^2 (4 - r) / 16, r / 4], which keeps the perturbation factor away from 0.
"""

from chaosieve import chaos

stats = chaos.orbit_statistics(0.123456789, r=4.0, n=10**6, burn_in=1000, bins=10)
print(f"r=4: mean={stats.mean:.4f} (arcsine mean 0.5)")

# histogram against the exact arcsine bin masses
masses = chaos.arcsine_bin_masses(10)
for (edge, count), m in zip(stats.histogram, masses):
    print(f"[{edge:.1f}, {edge + 0.1:.1f})  empirical {count / stats.samples:.4f}  arcsine {m:.4f}")
print("L1 distance:", chaos.invariant_density_distance(4.0, 10**6, 10))

s = chaos.orbit_statistics(0.123456789, r=3.9, n=10**5, burn_in=1000)
print(f"r=3.9: range [{s.min:.4f}, {s.max:.4f}], margin from 0/1 = {s.eta_margin:.4f}")

# the perturbation applies the map five times to the fractional part of a sum
print(chaos.logistic_iterate(0.3, chaos.LogisticParams(r=3.9, iterations=5)))
