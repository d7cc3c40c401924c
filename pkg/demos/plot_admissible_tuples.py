"""
Narrow admissible k-tuples
==========================

An admissible tuple misses at least one residue class modulo every prime
p <= k.  A greedy residue sieve over a sliding window finds narrow ones.
"""

from chaosieve import tuples

print(tuples.is_admissible((0, 2, 6)), tuples.is_admissible((0, 2, 4)))

for k in (2, 3, 4, 5, 6, 10, 20, 50):
    t = tuples.narrowest_tuple(k)
    print(f"k={k:2d}  diameter={tuples.diameter(t):4d}  {t if k <= 10 else ''}")

# for small k the greedy answer agrees with brute force over all offsets
print(tuples.exhaustive_narrowest(6, 20))
