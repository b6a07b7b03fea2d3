"""Per-column orchestration: footer profile in, assessed estimate out."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .combine import BatchMemoryEstimate, NdvEstimate, SchemaConstraints, combine, total_batch_memory
from .dictsize import (
    DictInversionResult,
    LengthEstimate,
    estimate_column_ndv_dict,
    estimate_mean_length,
)
from .errors import (
    NoDictionaryChunks,
    NoEstimate,
    NoLengthEvidence,
    NoStatistics,
    NotInvertible,
)
from .extrema import ExtremaCounts, MinMaxDiversityResult, count_distinct_extrema, estimate_column_ndv_minmax
from .footer import ByteSource, ColumnProfile, read_file_profiles
from .layout import DistributionReport, analyze_profile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ColumnAssessment:
    """Everything the pipeline learned about one column."""

    profile: ColumnProfile
    estimate: NdvEstimate | None
    no_estimate_reason: str | None
    dict_result: DictInversionResult | None
    dict_skip_reason: str | None
    minmax_result: MinMaxDiversityResult | None
    minmax_skip_reason: str | None
    length: LengthEstimate | None
    report: DistributionReport
    batch_memory: BatchMemoryEstimate | None

    @property
    def column_name(self) -> str:
        return self.profile.column_name

    def warnings(self) -> list[str]:
        notes = []
        if self.estimate is not None and self.estimate.is_lower_bound:
            notes.append("lower_bound")
        if self.dict_result is not None and self.dict_result.plain_fallback:
            notes.append("plain_encoding_fallback")
        if self.minmax_result is not None and self.minmax_result.saturated:
            notes.append("minmax_saturated")
        if not self.report.analyzable:
            notes.append("layout_unanalyzable")
        if self.estimate is None:
            notes.append(f"no_estimate:{self.no_estimate_reason}")
        return notes


def assess_profile(
    profile: ColumnProfile,
    constraints: SchemaConstraints | None = None,
    batch_bytes: float | None = None,
) -> ColumnAssessment:
    """Run both estimators, classify the layout, and combine.

    The two signals have independent prerequisites: dictionary inversion
    needs a dictionary-encoded chunk and a value length, min/max diversity
    needs statistics. Either may drop out; the combiner works with whatever
    remains and a column with neither is reported with a reason instead of
    a number.
    """
    counts: ExtremaCounts | None = None
    minmax_result: MinMaxDiversityResult | None = None
    minmax_skip = None
    try:
        counts = count_distinct_extrema(profile)
        minmax_result = estimate_column_ndv_minmax(profile, counts)
    except NoStatistics as exc:
        minmax_skip = str(exc)

    length: LengthEstimate | None = None
    dict_result: DictInversionResult | None = None
    dict_skip = None
    try:
        length = estimate_mean_length(
            profile, counts.values if counts is not None else ()
        )
        dict_result = estimate_column_ndv_dict(profile, length)
    except (NoLengthEvidence, NoDictionaryChunks, NotInvertible) as exc:
        dict_skip = str(exc)

    report = analyze_profile(profile)

    estimate: NdvEstimate | None = None
    no_estimate_reason = None
    if profile.non_null_values <= 0:
        no_estimate_reason = "all_null"
    else:
        try:
            estimate = combine(dict_result, minmax_result, profile, report, constraints)
        except NoEstimate as exc:
            no_estimate_reason = exc.reason
            logger.debug("column %s: %s", profile.column_name, exc)

    batch_memory = None
    if batch_bytes is not None and estimate is not None and length is not None:
        batch_memory = total_batch_memory(
            ndv=float(estimate.ndv_final),
            length=length.mean_bytes,
            values=profile.total_values,
            nulls=profile.total_nulls,
            batch_bytes=batch_bytes,
            layout_class=report.layout_class,
        )

    return ColumnAssessment(
        profile=profile,
        estimate=estimate,
        no_estimate_reason=no_estimate_reason,
        dict_result=dict_result,
        dict_skip_reason=dict_skip,
        minmax_result=minmax_result,
        minmax_skip_reason=minmax_skip,
        length=length,
        report=report,
        batch_memory=batch_memory,
    )


def assess_file(
    source: ByteSource,
    columns: set[str] | None = None,
    constraints: SchemaConstraints | None = None,
    batch_bytes: float | None = None,
) -> list[ColumnAssessment]:
    """Assess every (or a filtered set of) leaf column(s) in one file."""
    profiles = read_file_profiles(source)
    out = []
    for profile in profiles:
        if columns is not None and profile.column_name not in columns:
            continue
        out.append(assess_profile(profile, constraints, batch_bytes))
    return out
