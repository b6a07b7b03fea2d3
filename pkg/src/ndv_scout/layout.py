"""Layout classification from row-group range geometry.

Consecutive row-group (min, max) ranges tell whether a column was written
sorted, nearly sorted, or with values spread across the whole file. The
classification routes nothing by itself — the combiner always takes the max
of both estimators — but it drives batch-memory applicability and tells a
reader which estimate to trust.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import Unanalyzable, UninterpretableStatistic
from .footer import ColumnProfile, interpret_ordering_key

# Classification thresholds; all comparisons are strict, boundary values
# fall through to the next rule.
SORTED_MAX_OVERLAP = 0.1
SORTED_MIN_MONOTONICITY = 0.9
PSEUDO_MAX_OVERLAP = 0.3
PSEUDO_MIN_MONOTONICITY = 0.7
WELL_SPREAD_MIN_OVERLAP = 0.7

Range = tuple[float, float]


class LayoutClass(Enum):
    SORTED = "Sorted"
    PSEUDO_SORTED = "PseudoSorted"
    WELL_SPREAD = "WellSpread"
    MIXED = "Mixed"


def overlap_ratio(ranges: Sequence[Range]) -> float:
    """Summed intersection of consecutive ranges over the total span.

    The raw ratio is returned unclamped: n heavily overlapping ranges can
    push it toward n - 1, which is itself a strong well-spread signal the
    thresholds should see. A zero total span means every range is the same
    single point — the extreme of well-spread — and reports 1.0.

    Raises Unanalyzable with fewer than 2 ranges.
    """
    if len(ranges) < 2:
        raise Unanalyzable(f"need >= 2 ranges, got {len(ranges)}")
    for lo, hi in ranges:
        if lo > hi:
            raise ValueError(f"range ({lo}, {hi}) has min > max")
    span = max(hi for _, hi in ranges) - min(lo for lo, _ in ranges)
    if span == 0:
        return 1.0
    total = 0.0
    for (lo_a, hi_a), (lo_b, hi_b) in zip(ranges, ranges[1:]):
        total += max(0.0, min(hi_a, hi_b) - max(lo_a, lo_b))
    return total / span


def monotonicity(ranges: Sequence[Range]) -> float:
    """1 minus the fraction of direction changes in midpoint deltas.

    Zero deltas inherit the previous direction, so plateaus do not count as
    reversals; the first nonzero delta seeds the direction.

    Raises Unanalyzable with fewer than 3 ranges (no curvature evidence).
    """
    n = len(ranges)
    if n < 3:
        raise Unanalyzable(f"need >= 3 ranges, got {n}")
    midpoints = [(lo + hi) / 2 for lo, hi in ranges]
    sign_changes = 0
    prev_sign = 0
    for a, b in zip(midpoints, midpoints[1:]):
        delta = b - a
        sign = (delta > 0) - (delta < 0)
        if sign == 0:
            sign = prev_sign
        if prev_sign != 0 and sign != prev_sign:
            sign_changes += 1
        prev_sign = sign
    return 1.0 - sign_changes / (n - 2)


def classify(overlap: float, mono: float) -> LayoutClass:
    """Four-way layout class from raw overlap ratio and monotonicity."""
    if overlap < SORTED_MAX_OVERLAP and mono > SORTED_MIN_MONOTONICITY:
        return LayoutClass.SORTED
    if overlap < PSEUDO_MAX_OVERLAP and mono > PSEUDO_MIN_MONOTONICITY:
        return LayoutClass.PSEUDO_SORTED
    if overlap > WELL_SPREAD_MIN_OVERLAP:
        return LayoutClass.WELL_SPREAD
    return LayoutClass.MIXED


@dataclass(frozen=True)
class DistributionReport:
    """Layout diagnostics for one column.

    overlap_ratio is stored clamped to [0, 1] for reporting; classification
    happens on the raw value before clamping. analyzable=False (missing
    ranges or uninterpretable keys) always classifies Mixed.
    """

    overlap_ratio: float
    monotonicity: float
    layout_class: LayoutClass
    n_ranges: int
    analyzable: bool


def profile_ranges(profile: ColumnProfile) -> list[Range]:
    """Ordering-key ranges for every chunk that has statistics."""
    ranges: list[Range] = []
    for chunk in profile.chunks_with_statistics():
        lo = interpret_ordering_key(chunk.min_value, chunk.physical_type, profile.logical_type)
        hi = interpret_ordering_key(chunk.max_value, chunk.physical_type, profile.logical_type)
        ranges.append((lo, hi))
    return ranges


def _unanalyzable(n_ranges: int) -> DistributionReport:
    return DistributionReport(
        overlap_ratio=0.0,
        monotonicity=1.0,
        layout_class=LayoutClass.MIXED,
        n_ranges=n_ranges,
        analyzable=False,
    )


def analyze_profile(profile: ColumnProfile) -> DistributionReport:
    """Classify a column's physical layout from its chunk ranges.

    Chunks without statistics are skipped; with fewer than two usable ranges
    or uninterpretable keys the report is marked unanalyzable and classified
    Mixed. With exactly two ranges monotonicity defaults to 1.0 and the
    class rests on overlap alone.
    """
    try:
        ranges = profile_ranges(profile)
    except UninterpretableStatistic:
        return _unanalyzable(0)
    if len(ranges) < 2:
        return _unanalyzable(len(ranges))
    raw_overlap = overlap_ratio(ranges)
    mono = 1.0 if len(ranges) == 2 else monotonicity(ranges)
    return DistributionReport(
        overlap_ratio=min(raw_overlap, 1.0),
        monotonicity=mono,
        layout_class=classify(raw_overlap, mono),
        n_ranges=len(ranges),
        analyzable=True,
    )
