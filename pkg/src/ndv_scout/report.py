"""Serialization of estimate results for humans (table) and planners (JSON)."""

from __future__ import annotations

from typing import Sequence

from .pipeline import ColumnAssessment

REPORT_SCHEMA_VERSION = 1


def _column_json(assessment: ColumnAssessment, explain: bool) -> dict:
    profile = assessment.profile
    estimate = assessment.estimate
    entry: dict = {
        "column": profile.column_name,
        "ndv_final": estimate.ndv_final if estimate else None,
        "no_estimate_reason": assessment.no_estimate_reason,
        "is_lower_bound": bool(estimate.is_lower_bound) if estimate else False,
        "distribution_class": assessment.report.layout_class.value,
        "applied_bounds": list(estimate.applied_bounds) if estimate else [],
        "ndv_dict": assessment.dict_result.ndv_dict if assessment.dict_result else None,
        "ndv_minmax": (
            assessment.minmax_result.ndv_minmax if assessment.minmax_result else None
        ),
        "total_rows": profile.total_values,
        "non_null_rows": profile.non_null_values,
        "warnings": assessment.warnings(),
    }
    if assessment.batch_memory is not None:
        bm = assessment.batch_memory
        entry["batch_memory"] = {
            "batch_bytes": bm.batch_bytes,
            "global_dictionary_bytes": bm.global_dictionary_bytes,
            "batch_dictionary_bytes": bm.batch_dictionary_bytes,
            "n_batches": bm.n_batches,
            "total_dictionary_bytes": bm.total_dictionary_bytes,
            "applicable": bm.applicable,
        }
    if explain:
        diag = {
            "overlap_ratio": assessment.report.overlap_ratio,
            "monotonicity": assessment.report.monotonicity,
            "layout_analyzable": assessment.report.analyzable,
            "ranges_analyzed": assessment.report.n_ranges,
            "stats_completeness": {
                "chunks": profile.stats_completeness.chunks,
                "with_min_max": profile.stats_completeness.with_min_max,
                "with_null_count": profile.stats_completeness.with_null_count,
            },
            "dict_skip_reason": assessment.dict_skip_reason,
            "minmax_skip_reason": assessment.minmax_skip_reason,
        }
        if assessment.length is not None:
            diag["mean_value_bytes"] = assessment.length.mean_bytes
            diag["length_sample_size"] = assessment.length.sample_size
        if assessment.dict_result is not None:
            diag["dict_per_chunk_ndv"] = list(assessment.dict_result.per_chunk_ndv)
            diag["dict_iterations_max"] = assessment.dict_result.iterations_max
            diag["dict_converged"] = assessment.dict_result.converged
        if assessment.minmax_result is not None:
            diag["distinct_minima"] = assessment.minmax_result.m_min
            diag["distinct_maxima"] = assessment.minmax_result.m_max
            diag["row_groups_with_stats"] = assessment.minmax_result.n_groups
            diag["ndv_from_min"] = assessment.minmax_result.ndv_from_min
            diag["ndv_from_max"] = assessment.minmax_result.ndv_from_max
        entry["diagnostics"] = diag
    return entry


def estimate_report_json(
    results: Sequence[tuple[str, Sequence[ColumnAssessment]]], explain: bool = False
) -> dict:
    """Machine report: stable schema, sorted by path then column."""
    files = []
    for path, assessments in sorted(results, key=lambda item: item[0]):
        files.append(
            {
                "path": str(path),
                "columns": [
                    _column_json(a, explain)
                    for a in sorted(assessments, key=lambda a: a.column_name)
                ],
            }
        )
    return {"schema_version": REPORT_SCHEMA_VERSION, "files": files}


def estimate_report_table(
    results: Sequence[tuple[str, Sequence[ColumnAssessment]]]
) -> str:
    """Human report; diagnostics are truncated, JSON is the full contract."""
    lines = []
    for path, assessments in sorted(results, key=lambda item: item[0]):
        lines.append(str(path))
        header = (
            f"  {'column':<24} {'ndv':>12} {'class':<12} {'lb':<3} "
            f"{'dict':>12} {'minmax':>12} {'bounds'}"
        )
        lines.append(header)
        for a in sorted(assessments, key=lambda a: a.column_name):
            est = a.estimate
            ndv = str(est.ndv_final) if est else f"- ({a.no_estimate_reason})"
            lb = "yes" if est and est.is_lower_bound else "-"
            dict_ndv = f"{a.dict_result.ndv_dict:.0f}" if a.dict_result else "-"
            minmax_ndv = f"{a.minmax_result.ndv_minmax:.0f}" if a.minmax_result else "-"
            bounds = ",".join(est.applied_bounds) if est and est.applied_bounds else "-"
            lines.append(
                f"  {a.column_name:<24} {ndv:>12} "
                f"{a.report.layout_class.value:<12} {lb:<3} "
                f"{dict_ndv:>12} {minmax_ndv:>12} {bounds}"
            )
    if not lines:
        lines.append("(no columns)")
    return "\n".join(lines)
