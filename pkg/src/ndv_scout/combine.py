"""Final estimate combination, deterministic bounds, and batch memory.

Both estimators underestimate in different regimes, so the hybrid takes the
maximum of whatever is available, then clamps with everything that is known
for certain: the non-null row count, integer/date value ranges, the
single-byte-string alphabet, and any externally supplied schema bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .dictsize import DictInversionResult
from .errors import NoEstimate, UninterpretableStatistic
from .extrema import MinMaxDiversityResult
from .footer import ColumnProfile, LogicalType, interpret_ordering_key
from .layout import DistributionReport, LayoutClass

# Upper bound for string columns whose observed extrema are all single
# bytes: the printable ASCII alphabet. Kept adjustable; the value is a
# convention, not a law.
SINGLE_BYTE_STRING_BOUND = 128

BOUND_NON_NULL_ROWS = "non_null_rows"
BOUND_INTEGER_RANGE = "integer_range"
BOUND_SINGLE_BYTE_ASCII = "single_byte_ascii"
BOUND_SCHEMA_CONSTRAINT = "schema_constraint"


@dataclass(frozen=True)
class SchemaConstraints:
    """Optional per-column NDV caps from catalog knowledge (e.g. FK targets)."""

    max_ndv: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for name, bound in self.max_ndv.items():
            if bound < 1:
                raise ValueError(f"constraint for {name!r} must be >= 1, got {bound}")

    def bound_for(self, column_name: str) -> int | None:
        return self.max_ndv.get(column_name)


@dataclass(frozen=True)
class EstimateDiagnostics:
    """Per-method evidence behind a combined estimate."""

    mean_value_bytes: float | None
    length_sample_size: int | None
    distinct_minima: int | None
    distinct_maxima: int | None
    row_groups_with_stats: int | None
    overlap_ratio: float
    monotonicity: float


@dataclass(frozen=True)
class NdvEstimate:
    """Final bounded NDV for one column."""

    column_name: str
    ndv_final: int
    ndv_dict: float | None
    ndv_minmax: float | None
    applied_bounds: tuple[str, ...]
    distribution_class: LayoutClass
    is_lower_bound: bool
    diagnostics: EstimateDiagnostics


@dataclass(frozen=True)
class BatchMemoryEstimate:
    """Predicted dictionary memory for byte-budget batches."""

    batch_bytes: float
    global_dictionary_bytes: float
    batch_dictionary_bytes: float
    n_batches: float
    total_dictionary_bytes: float
    applicable: bool


def type_upper_bound(
    profile: ColumnProfile,
    global_min: object | None,
    global_max: object | None,
    ascii_bound: int = SINGLE_BYTE_STRING_BOUND,
) -> tuple[int, str] | None:
    """Deterministic NDV cap from the column's type, if one exists.

    Integer and date columns cannot hold more distinct values than their
    observed value range; string columns whose every observed extremum is a
    single byte are capped at the printable-ASCII alphabet. Returns the
    bound with its label, or None when the type offers nothing.
    """
    if profile.logical_type in (LogicalType.INTEGER, LogicalType.DATE):
        if global_min is None or global_max is None:
            return None
        try:
            lo = interpret_ordering_key(global_min, profile.physical_type, profile.logical_type)
            hi = interpret_ordering_key(global_max, profile.physical_type, profile.logical_type)
        except UninterpretableStatistic:
            return None
        return int(hi) - int(lo) + 1, BOUND_INTEGER_RANGE
    if profile.logical_type is LogicalType.STRING:
        extrema = [
            v
            for c in profile.chunks_with_statistics()
            for v in (c.min_value, c.max_value)
        ]
        if extrema and all(
            isinstance(v, (bytes, bytearray)) and len(v) == 1 for v in extrema
        ):
            return ascii_bound, BOUND_SINGLE_BYTE_ASCII
    return None


def _global_extrema(profile: ColumnProfile) -> tuple[object | None, object | None]:
    """Raw global min/max across chunks, via ordering keys."""
    chunks = profile.chunks_with_statistics()
    if not chunks:
        return None, None
    try:
        keyed_min = min(
            chunks,
            key=lambda c: interpret_ordering_key(
                c.min_value, c.physical_type, profile.logical_type
            ),
        )
        keyed_max = max(
            chunks,
            key=lambda c: interpret_ordering_key(
                c.max_value, c.physical_type, profile.logical_type
            ),
        )
    except UninterpretableStatistic:
        return None, None
    return keyed_min.min_value, keyed_max.max_value


def combine(
    dict_result: DictInversionResult | None,
    minmax_result: MinMaxDiversityResult | None,
    profile: ColumnProfile,
    report: DistributionReport,
    constraints: SchemaConstraints | None = None,
) -> NdvEstimate:
    """Take the max of available estimates and clamp with hard bounds.

    The lower-bound flag propagates only from the winning side: plain
    fallback when dictionary inversion wins, saturation when min/max
    diversity wins. Bounds are recorded only when they actually cut the
    candidate down.

    Raises NoEstimate when neither method produced a value.
    """
    candidates: list[tuple[str, float]] = []
    if dict_result is not None:
        candidates.append(("dict", dict_result.ndv_dict))
    if minmax_result is not None:
        candidates.append(("minmax", minmax_result.ndv_minmax))
    if not candidates:
        raise NoEstimate(
            f"column {profile.column_name!r}: no estimation path available",
            reason="no_signal",
        )

    winner_side, candidate = max(candidates, key=lambda item: item[1])
    if dict_result is not None and dict_result.ndv_dict >= candidate:
        winner_side = "dict"  # deterministic tie-break toward the dict side

    bounds: dict[str, float] = {BOUND_NON_NULL_ROWS: float(profile.non_null_values)}
    type_bound = type_upper_bound(profile, *_global_extrema(profile))
    if type_bound is not None:
        value, label = type_bound
        bounds[label] = float(value)
    if constraints is not None:
        schema_bound = constraints.bound_for(profile.column_name)
        if schema_bound is not None:
            bounds[BOUND_SCHEMA_CONSTRAINT] = float(schema_bound)

    bounded = min(candidate, *bounds.values())
    applied = tuple(
        sorted(name for name, value in bounds.items() if value == bounded and value < candidate)
    )
    ndv_final = max(1, round(bounded))

    if winner_side == "dict":
        is_lower_bound = bool(dict_result.plain_fallback)
    else:
        is_lower_bound = bool(minmax_result.saturated)

    return NdvEstimate(
        column_name=profile.column_name,
        ndv_final=ndv_final,
        ndv_dict=dict_result.ndv_dict if dict_result else None,
        ndv_minmax=minmax_result.ndv_minmax if minmax_result else None,
        applied_bounds=applied,
        distribution_class=report.layout_class,
        is_lower_bound=is_lower_bound,
        diagnostics=EstimateDiagnostics(
            mean_value_bytes=dict_result.mean_len if dict_result else None,
            length_sample_size=dict_result.len_sample_size if dict_result else None,
            distinct_minima=minmax_result.m_min if minmax_result else None,
            distinct_maxima=minmax_result.m_max if minmax_result else None,
            row_groups_with_stats=minmax_result.n_groups if minmax_result else None,
            overlap_ratio=report.overlap_ratio,
            monotonicity=report.monotonicity,
        ),
    )


def batch_dictionary_size(ndv: float, length: float, batch_bytes: float) -> float:
    """Expected dictionary bytes needed by one batch of the given size.

    A batch of B bytes holds B / length rows; by the coupon-collector curve
    those rows touch a D_global * (1 - e^(-B / D_global)) slice of the
    global dictionary D_global = ndv * length.
    """
    if ndv < 1:
        raise ValueError(f"ndv must be >= 1, got {ndv}")
    if length <= 0:
        raise ValueError(f"length must be positive, got {length}")
    if batch_bytes < 0:
        raise ValueError(f"batch_bytes must be >= 0, got {batch_bytes}")
    global_bytes = ndv * length
    return -global_bytes * math.expm1(-batch_bytes / global_bytes)


def total_batch_memory(
    ndv: float,
    length: float,
    values: int,
    nulls: int,
    batch_bytes: float,
    layout_class: LayoutClass,
) -> BatchMemoryEstimate:
    """Dictionary memory across all batches of a column scan.

    For sorted and pseudo-sorted layouts each batch sees its own value
    subset rather than a representative sample, so the coupon model does not
    apply; the numbers are still computed but flagged inapplicable.
    """
    if batch_bytes <= 0:
        raise ValueError(f"batch_bytes must be positive, got {batch_bytes}")
    global_bytes = ndv * length
    per_batch = batch_dictionary_size(ndv, length, batch_bytes)
    n_batches = (values - nulls) * length / batch_bytes
    return BatchMemoryEstimate(
        batch_bytes=batch_bytes,
        global_dictionary_bytes=global_bytes,
        batch_dictionary_bytes=per_batch,
        n_batches=n_batches,
        total_dictionary_bytes=n_batches * per_batch,
        applicable=layout_class not in (LayoutClass.SORTED, LayoutClass.PSEUDO_SORTED),
    )
