"""Classifying physical layout from row-group range geometry.

Consecutive row-group (min, max) ranges overlap heavily when values are
spread across the file and barely at all when the file is sorted; midpoint
progression separates sorted from merely partitioned. The resulting class
annotates which estimator to trust and gates batch-memory predictions.
"""

from ndv_scout import analyze_profile
from ndv_scout.synth import ColumnSpec, Layout, simulate_profile

print(f"{'layout':<14} {'overlap':>8} {'monotonicity':>13} {'detected':>12}")
print("-" * 52)
for layout in (Layout.SORTED, Layout.PARTITIONED, Layout.UNIFORM, Layout.CLUSTERED):
    spec = ColumnSpec(
        name="demo",
        value_type="int64",
        ndv=2000,
        rows=40_000,
        row_group_rows=1000,
        layout=layout,
        seed=11,
    )
    report = analyze_profile(simulate_profile(spec))
    print(
        f"{layout.value:<14} {report.overlap_ratio:>8.3f} "
        f"{report.monotonicity:>13.3f} {report.layout_class.value:>12}"
    )

print()
print("Sorted runs keep disjoint, monotone ranges; partitioned data keeps the")
print("disjointness but scrambles the direction; well-spread data overlaps")
print("almost completely. The reported overlap is clamped to [0, 1] while the")
print("classifier sees the raw sum, which can exceed 1 with many ranges.")
