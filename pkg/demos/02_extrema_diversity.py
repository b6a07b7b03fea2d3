"""Row-group min/max statistics are an accidental cardinality sketch.

Every row group records its minimum and maximum value. Across n row groups
that is n draws from the column's values; how many of those draws are
DISTINCT depends on the total number of distinct values. The coupon
collector curve makes that quantitative, and inverting it gives an
estimator that works exactly where dictionary inversion fails: sorted and
partitioned data.
"""

import numpy as np

from ndv_scout import expected_distinct, invert_coupon_collector

print("Expected distinct results of n=50 draws over a population of size N:")
for ndv in (10, 50, 100, 1000, 100_000):
    print(f"  N={ndv:>7,}  ->  E[distinct] = {expected_distinct(ndv, 50):7.2f}")

print()
print("Observing m distinct extrema across n=50 row groups, invert the curve:")
for m in (5, 20, 39.35, 45, 49):
    ndv, saturated = invert_coupon_collector(m, 50)
    print(f"  m={m:>6}  ->  NDV ~ {ndv:>10,.1f}   saturated={saturated}")

print()
print("Saturation: when every extremum is distinct (m = n) the curve has no")
print("finite root; regularizing with m_eff = n - 0.5 yields the smallest")
print("population for which all-distinct draws stop being surprising (~n^2):")
for n in (10, 20, 50):
    ndv, _ = invert_coupon_collector(n, n)
    print(f"  n={n:>3}  ->  NDV floor ~ {ndv:>8,.0f}   (n^2 = {n * n:,})")

print()
print("Sanity: simulated draws-with-replacement match the curve (N=100, n=50):")
counts = [
    len(np.unique(np.random.default_rng(seed).integers(0, 100, 50)))
    for seed in range(1000)
]
print(f"  simulated mean distinct = {np.mean(counts):.2f}")
print(f"  model expectation       = {expected_distinct(100, 50):.2f}")
