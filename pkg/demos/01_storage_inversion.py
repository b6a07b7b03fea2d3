"""Dictionary storage sizes pin down distinct counts.

A dictionary-encoded column chunk stores every distinct value once plus a
bit-packed index per row, so the footer's total_uncompressed_size is a
function of the distinct count. This walk-through evaluates that function
forward, then inverts it with the safeguarded Newton solver.
"""

from ndv_scout import detect_plain_fallback, invert_storage_size, storage_size

print("Forward model: size(ndv) = ndv * len + rows * ceil(log2 ndv) / 8")
for ndv in (1, 3, 100, 10_000):
    size = storage_size(ndv, length=8, values=1_000_000)
    print(f"  ndv={ndv:>6}  ->  {size:>12,.0f} bytes (len=8, 1M rows)")

print()
print("Inverting the observed size recovers the distinct count:")
for true_ndv in (3, 100, 10_000, 250_000):
    size = storage_size(true_ndv, length=8, values=1_000_000)
    ndv, converged, iterations = invert_storage_size(size, 1_000_000, 0, 8)
    print(
        f"  size={size:>12,.0f}  ->  ndv={ndv:>9,.0f}"
        f"   ({iterations} iterations, converged={converged})"
    )

print()
print("The same size can only stretch so far: nearly-all-distinct columns")
print("make writers abandon the dictionary, and the inversion then reads")
print("the plain-encoded size as 'ndv close to the row count':")
rows = 100_000
plain_size = rows * 26.0  # ~24-byte strings + prefixes, no dictionary
ndv, _, _ = invert_storage_size(plain_size, rows, 0, 24.0)
flagged = detect_plain_fallback(ndv, rows, 0, plain_size, 24.0)
print(f"  inverted ndv = {ndv:,.0f} of {rows:,} rows -> fallback detected: {flagged}")
print("  such estimates are surfaced as lower bounds, not point estimates")
