"""Predicting per-batch dictionary memory without reading a batch.

Engines that process columns in fixed byte budgets need to size dictionary
allocations up front. A batch of B bytes holds B/len rows; by the coupon
collector curve those rows touch only part of the global dictionary. The
prediction is checked here against direct simulation, and the caveat is
shown too: for sorted data each batch holds its own value range, so the
model is flagged inapplicable rather than trusted.
"""

import numpy as np

from ndv_scout import batch_dictionary_size, total_batch_memory
from ndv_scout.layout import LayoutClass

ndv, length = 1000, 8
global_bytes = ndv * length
rng = np.random.default_rng(0)

print(f"global dictionary: {ndv} values x {length} B = {global_bytes:,} bytes\n")
print(f"{'batch bytes':>12} {'predicted':>12} {'simulated':>12} {'deviation':>10}")
for ratio in (0.25, 0.5, 1.0, 2.0, 5.0):
    batch_bytes = ratio * global_bytes
    rows_per_batch = int(batch_bytes / length)
    batches = rng.integers(0, ndv, size=(40, rows_per_batch))
    simulated = float(np.mean([len(np.unique(b)) * length for b in batches]))
    predicted = batch_dictionary_size(ndv, length, batch_bytes)
    print(
        f"{batch_bytes:>12,.0f} {predicted:>12,.1f} {simulated:>12,.1f} "
        f"{abs(simulated - predicted) / predicted:>9.2%}"
    )

print()
estimate = total_batch_memory(ndv, length, 200_000, 0, 16_384, LayoutClass.WELL_SPREAD)
print(
    f"scan of 200k rows in 16 KiB batches: {estimate.n_batches:.0f} batches, "
    f"{estimate.total_dictionary_bytes:,.0f} bytes of dictionary churn"
)
sorted_estimate = total_batch_memory(ndv, length, 200_000, 0, 16_384, LayoutClass.SORTED)
print(
    f"same column written sorted: applicable={sorted_estimate.applicable} "
    "(each batch sees a distinct value subset; budget for the full dictionary)"
)
