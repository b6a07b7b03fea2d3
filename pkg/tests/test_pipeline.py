import numpy as np
import pyarrow as pa
import pyarrow.parquet as pq

from ndv_scout import synth
from ndv_scout.combine import SchemaConstraints
from ndv_scout.layout import LayoutClass
from ndv_scout.pipeline import assess_file, assess_profile


def test_uniform_file_end_to_end(uniform_file):
    path, truth = uniform_file
    (assessment,) = assess_file(path)
    estimate = assessment.estimate
    assert estimate is not None
    # well-spread int64: dictionary inversion carries the estimate
    truth_ndv = truth.columns["ints"].ndv_true
    assert abs(estimate.ndv_final - truth_ndv) / truth_ndv < 0.2
    assert assessment.report.layout_class is LayoutClass.WELL_SPREAD
    assert not estimate.is_lower_bound


def test_all_null_column_reports_reason(tmp_path):
    table = pa.table({"x": pa.array([None] * 100, type=pa.int64())})
    pq.write_table(table, tmp_path / "n.parquet", row_group_size=50)
    (assessment,) = assess_file(tmp_path / "n.parquet")
    assert assessment.estimate is None
    assert assessment.no_estimate_reason == "all_null"
    assert any(w.startswith("no_estimate") for w in assessment.warnings())


def test_stats_disabled_still_estimates_fixed_width_via_dict(tmp_path):
    rng = np.random.default_rng(0)
    table = pa.table({"x": pa.array(rng.integers(0, 200, 10_000), type=pa.int64())})
    pq.write_table(
        table, tmp_path / "ns.parquet", row_group_size=1000, write_statistics=False
    )
    (assessment,) = assess_file(tmp_path / "ns.parquet")
    assert assessment.minmax_result is None
    assert assessment.minmax_skip_reason is not None
    assert assessment.dict_result is not None  # schema width needs no statistics
    assert assessment.estimate is not None
    assert abs(assessment.estimate.ndv_final - 200) / 200 < 0.2
    assert not assessment.report.analyzable


def test_string_column_without_stats_has_no_signal(tmp_path):
    table = pa.table({"s": pa.array([f"v{i % 50}" for i in range(1000)])})
    pq.write_table(
        table, tmp_path / "s.parquet", row_group_size=250, write_statistics=False
    )
    (assessment,) = assess_file(tmp_path / "s.parquet")
    assert assessment.estimate is None
    assert assessment.no_estimate_reason == "no_signal"
    assert assessment.dict_skip_reason is not None


def test_plain_encoded_column_uses_minmax_only(tmp_path):
    rng = np.random.default_rng(1)
    table = pa.table({"x": pa.array(rng.integers(0, 500, 10_000), type=pa.int64())})
    pq.write_table(
        table, tmp_path / "p.parquet", row_group_size=500, use_dictionary=False
    )
    (assessment,) = assess_file(tmp_path / "p.parquet")
    assert assessment.dict_result is None
    assert assessment.minmax_result is not None
    assert assessment.estimate is not None
    assert assessment.estimate.ndv_dict is None


def test_batch_memory_emitted_when_requested(uniform_file):
    path, _ = uniform_file
    (plain,) = assess_file(path)
    assert plain.batch_memory is None
    (with_batch,) = assess_file(path, batch_bytes=4096.0)
    assert with_batch.batch_memory is not None
    assert with_batch.batch_memory.batch_bytes == 4096.0
    assert with_batch.batch_memory.applicable  # well-spread layout


def test_column_filter(uniform_file):
    path, _ = uniform_file
    assert assess_file(path, columns={"ints"})
    assert assess_file(path, columns={"missing"}) == []


def test_constraints_flow_through(uniform_file):
    path, _ = uniform_file
    (assessment,) = assess_file(path, constraints=SchemaConstraints({"ints": 50}))
    assert assessment.estimate.ndv_final == 50
    assert "schema_constraint" in assessment.estimate.applied_bounds


def test_assess_profile_on_simulated_sorted_column():
    spec = synth.ColumnSpec(
        name="s",
        value_type="int64",
        ndv=1000,
        rows=3000,
        row_group_rows=100,
        layout=synth.Layout.SORTED,
        seed=3,
    )
    assessment = assess_profile(synth.simulate_profile(spec))
    assert assessment.report.layout_class is LayoutClass.SORTED
    assert assessment.minmax_result.saturated
    assert assessment.estimate.is_lower_bound
    assert "minmax_saturated" in assessment.warnings()
    # hybrid sits above the per-chunk dictionary signal on sorted data
    assert assessment.estimate.ndv_final > assessment.dict_result.ndv_dict


def test_warnings_for_fallback_column(tmp_path):
    # all-distinct strings with a small dictionary page limit: the writer
    # falls back to plain encoding mid-chunk
    values = [f"{i:032d}" for i in np.random.default_rng(5).permutation(30_000)]
    table = pa.table({"s": pa.array(values)})
    pq.write_table(
        table,
        tmp_path / "fb.parquet",
        row_group_size=10_000,
        dictionary_pagesize_limit=65_536,
        compression="none",
    )
    (assessment,) = assess_file(tmp_path / "fb.parquet")
    assert assessment.dict_result is not None
    assert assessment.dict_result.plain_fallback
    assert assessment.estimate.is_lower_bound
    assert "plain_encoding_fallback" in assessment.warnings()
