"""NDV estimation from the diversity of row-group min/max statistics.

Each row group contributes one minimum and one maximum. Treating the n
minima as n draws (with replacement) from the column's distinct values, the
expected number of distinct draws follows the coupon-collector curve
ndv * (1 - e^(-n/ndv)); observing m distinct extrema and inverting the curve
recovers ndv. The same inversion runs on the maxima and the larger estimate
wins. This is the signal that survives sorted and partitioned layouts, where
dictionary inversion only ever sees per-chunk slices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import NoStatistics
from .footer import ColumnProfile
from .rootfind import RootProblem, solve

# Population cap for the inversion; far beyond any realistic column, and the
# combiner clamps to the non-null row count anyway.
NDV_SEARCH_CEILING = 1e12
# With m == n the curve has no finite root; half a count below n is the
# smallest population for which all-distinct draws stop being surprising.
SATURATION_RELIEF = 0.5


class ExtremaCounts(NamedTuple):
    m_min: int
    m_max: int
    values: frozenset
    n_groups: int


def count_distinct_extrema(profile: ColumnProfile) -> ExtremaCounts:
    """Exact distinct counts of raw min and max statistics.

    Counting is over the raw statistic values, not ordering keys: two values
    that collide in an 8-byte key prefix are still distinct here. The union
    of both sets is returned for mean-length estimation.

    Raises NoStatistics when no chunk carries min/max.
    """
    with_stats = profile.chunks_with_statistics()
    if not with_stats:
        raise NoStatistics(f"column {profile.column_name!r} has no min/max statistics")
    mins = {c.min_value for c in with_stats}
    maxs = {c.max_value for c in with_stats}
    return ExtremaCounts(
        m_min=len(mins),
        m_max=len(maxs),
        values=frozenset(mins | maxs),
        n_groups=len(with_stats),
    )


def expected_distinct(ndv: float, draws: float) -> float:
    """Expected distinct count after `draws` uniform draws over ndv values."""
    if ndv < 1:
        raise ValueError(f"ndv must be >= 1, got {ndv}")
    if draws < 0:
        raise ValueError(f"draws must be >= 0, got {draws}")
    if draws == 0:
        return 0.0
    return -ndv * math.expm1(-draws / ndv)


def invert_coupon_collector(m: float, n: int) -> tuple[float, bool]:
    """Recover ndv from m distinct values seen in n draws.

    Saturation (m == n) is regularized with m_eff = n - 0.5 and flagged; the
    resulting estimate scales like n^2, a floor rather than a point estimate.
    The returned ndv is always >= m.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 1 <= m <= n:
        raise ValueError(f"m={m} outside [1, n={n}]")

    saturated = m == n
    m_eff = n - SATURATION_RELIEF if saturated else float(m)

    def objective(x: float) -> float:
        return -x * math.expm1(-n / x) - m_eff

    def derivative(x: float) -> float:
        t = n / x
        return 1.0 - math.exp(-t) * (1.0 + t)

    result = solve(
        RootProblem(
            objective=objective,
            derivative=derivative,
            initial_guess=m_eff,
            lower_bound=m_eff,
            upper_bound=NDV_SEARCH_CEILING,
        )
    )
    return max(result.root, float(m)), saturated


@dataclass(frozen=True)
class MinMaxDiversityResult:
    """Column-level outcome of min/max diversity inversion."""

    n_groups: int
    m_min: int
    m_max: int
    ndv_from_min: float
    ndv_from_max: float
    ndv_minmax: float
    saturated: bool


def estimate_column_ndv_minmax(
    profile: ColumnProfile, counts: ExtremaCounts | None = None
) -> MinMaxDiversityResult:
    """Invert both extrema counts and retain the larger estimate.

    The saturated flag reflects the retained side only: a saturated loser
    does not taint the winner.
    """
    if counts is None:
        counts = count_distinct_extrema(profile)
    ndv_min, sat_min = invert_coupon_collector(counts.m_min, counts.n_groups)
    ndv_max, sat_max = invert_coupon_collector(counts.m_max, counts.n_groups)
    if ndv_min >= ndv_max:
        retained, saturated = ndv_min, sat_min
    else:
        retained, saturated = ndv_max, sat_max
    return MinMaxDiversityResult(
        n_groups=counts.n_groups,
        m_min=counts.m_min,
        m_max=counts.m_max,
        ndv_from_min=ndv_min,
        ndv_from_max=ndv_max,
        ndv_minmax=retained,
        saturated=saturated,
    )
