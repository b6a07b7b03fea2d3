"""Generate a corpus, estimate from footers only, score against truth.

This is the full loop: synthesize Parquet files with known distinct counts,
run the hybrid estimator on nothing but their footers, and compare. The
validation report also separates model error from writer overhead (page
headers, length prefixes) by re-running the estimators on idealized
profiles rebuilt from the ground-truth sidecars.
"""

import tempfile
from pathlib import Path

from ndv_scout import assess_file
from ndv_scout.synth import ColumnSpec, Layout, generate_file
from ndv_scout.validate import validate_corpus

workdir = Path(tempfile.mkdtemp(prefix="ndv_scout_demo_"))
print(f"corpus directory: {workdir}\n")

for layout, ndv in [
    (Layout.UNIFORM, 500),
    (Layout.SORTED, 2000),
    (Layout.PARTITIONED, 2000),
    (Layout.SKEWED, 1000),
]:
    spec = ColumnSpec(
        name="values",
        value_type="int64",
        ndv=ndv,
        rows=40_000,
        row_group_rows=1000,
        layout=layout,
        seed=3,
    )
    path = workdir / f"{layout.value.lower()}.parquet"
    truth = generate_file([spec], path)
    (assessment,) = assess_file(path)
    estimate = assessment.estimate
    true_ndv = truth.columns["values"].ndv_true
    print(
        f"{layout.value:<12} truth={true_ndv:>6,}  estimate={estimate.ndv_final:>6,}  "
        f"class={estimate.distribution_class.value:<11} "
        f"dict={estimate.ndv_dict:>8.0f}  minmax={estimate.ndv_minmax:>8.1f}"
        f"{'  (lower bound)' if estimate.is_lower_bound else ''}"
    )

print()
print("validation summary (median/p90 relative error per method):")
print(validate_corpus(workdir).to_table())
