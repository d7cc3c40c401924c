"""
Prime gap statistics with a segmented sieve
===========================================

Enumerate primes below a limit, tally consecutive gaps, and set the
numbers next to the printed reference statistics for N = 10**8.
"""

import numpy as np

from chaosieve import primes

# the sieve works on odd numbers only, one cache-sized segment at a time
p = primes.enumerate_primes(10**6)
print("primes below 10**6:", p.size, " last:", p[-1])

# gaps straight from the prime list ...
gaps = np.diff(p)
print("largest gap below 10**6:", gaps.max())

# ... or streamed, without materializing the primes at all
summary = primes.gap_summary(10**7, thresholds=(8, 180, 700), top=5)
for gap, count in summary.top_gaps:
    print(f"gap {gap:3d}: {count:8d}")
for t, frac in summary.threshold_fractions:
    print(f"fraction of gaps <= {t}: {100 * frac:.2f}%")

# the reference printout cannot be reproduced; the comparison says where
cmp = primes.compare_with_reference(primes.gap_summary(10**8))
print("computed max gap at 10**8:", cmp["computed"]["max_gap"],
      " reference:", cmp["reference"]["max_gap"])
print("discrepancy flags:", cmp["discrepancy"])
