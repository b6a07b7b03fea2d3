import math

import numpy as np
import pytest

from ndv_scout.errors import NoStatistics
from ndv_scout.extrema import (
    ExtremaCounts,
    count_distinct_extrema,
    estimate_column_ndv_minmax,
    expected_distinct,
    invert_coupon_collector,
)
from ndv_scout.footer import ColumnChunkMeta, LogicalType, PhysicalType, build_profile

from oracles import coupon_root

# Frozen from the bisection oracle (tol 1e-9).
ORACLE_INVERT_40_OF_50 = 107.70923358936528
ORACLE_INVERT_38_OF_50 = 86.73136548508904
ORACLE_SATURATED_50 = 2483.3054062214424
ORACLE_SATURATED_10 = 96.63812248176794


def _chunk(idx, min_value, max_value):
    return ColumnChunkMeta(
        row_group_index=idx,
        uncompressed_size=100,
        value_count=100,
        null_count=0,
        min_value=min_value,
        max_value=max_value,
        dictionary_encoded=True,
        physical_type=PhysicalType.BYTE_ARRAY,
    )


def _profile(chunks):
    return build_profile("c", chunks, None, LogicalType.STRING)


# ---------------------------------------------------------------------------
# Distinct extrema counting


def test_constant_extrema_count_once():
    profile = _profile([_chunk(i, b"a", b"z") for i in range(50)])
    counts = count_distinct_extrema(profile)
    assert counts.m_min == 1
    assert counts.m_max == 1
    assert counts.values == frozenset({b"a", b"z"})
    assert counts.n_groups == 50


def test_disjoint_sorted_ranges_have_all_distinct_extrema():
    profile = _profile(
        [_chunk(i, f"{100 * i:04d}".encode(), f"{100 * i + 99:04d}".encode()) for i in range(10)]
    )
    counts = count_distinct_extrema(profile)
    assert counts.m_min == 10
    assert counts.m_max == 10


def test_distinctness_is_over_raw_bytes_not_keys():
    # Same 8-byte prefix, distinct beyond it: must count as two values.
    profile = _profile(
        [_chunk(0, b"commonpref-a", b"z"), _chunk(1, b"commonpref-b", b"z")]
    )
    counts = count_distinct_extrema(profile)
    assert counts.m_min == 2


def test_chunks_without_statistics_are_skipped():
    profile = _profile([_chunk(0, b"a", b"b"), _chunk(1, None, None)])
    counts = count_distinct_extrema(profile)
    assert counts.n_groups == 1


def test_no_statistics_raises():
    profile = _profile([_chunk(0, None, None)])
    with pytest.raises(NoStatistics):
        count_distinct_extrema(profile)


# ---------------------------------------------------------------------------
# Coupon-collector curve


def test_expected_distinct_reference_point():
    assert expected_distinct(100, 50) == pytest.approx(39.346934028736655, rel=1e-12)


def test_expected_distinct_edge_cases():
    assert expected_distinct(12345, 0) == 0.0
    assert expected_distinct(1, 50) == pytest.approx(1.0, abs=1e-12)


def test_expected_distinct_monotone_in_both_arguments():
    grid = [1, 2, 10, 100, 10**4]
    for a, b in zip(grid, grid[1:]):
        assert expected_distinct(b, 50) > expected_distinct(a, 50)
        assert expected_distinct(100, b) > expected_distinct(100, a)


def test_expected_distinct_rejects_bad_domain():
    with pytest.raises(ValueError):
        expected_distinct(0.5, 10)
    with pytest.raises(ValueError):
        expected_distinct(10, -1)


# ---------------------------------------------------------------------------
# Inversion


def test_invert_recovers_reference_population():
    ndv, saturated = invert_coupon_collector(expected_distinct(100, 50), 50)
    assert not saturated
    assert ndv == pytest.approx(100.0, rel=1e-6)
    assert ndv == pytest.approx(coupon_root(expected_distinct(100, 50), 50), rel=1e-6)


def test_invert_single_group_single_value():
    ndv, saturated = invert_coupon_collector(1, 1)
    assert saturated
    assert ndv == 1.0  # raw root ~0.63 clamped up to m


def test_invert_saturated_fifty_groups():
    ndv, saturated = invert_coupon_collector(50, 50)
    assert saturated
    assert ndv == pytest.approx(ORACLE_SATURATED_50, rel=1e-4)
    # sanity against the closed-form check: 2500 * (1 - e^(-0.02)) = 49.50
    assert 2500 * -math.expm1(-50 / 2500) == pytest.approx(49.5025, abs=1e-3)


def test_invert_result_never_below_m():
    for m, n in ((1, 1), (3, 3), (5, 50), (49, 50), (50, 50)):
        ndv, _ = invert_coupon_collector(m, n)
        assert ndv >= m


def test_invert_monotone_in_m():
    previous = 0.0
    for m in (10, 20, 30, 40, 45, 49):
        ndv, _ = invert_coupon_collector(m, 50)
        assert ndv > previous
        previous = ndv


def test_invert_rejects_bad_domain():
    with pytest.raises(ValueError):
        invert_coupon_collector(0, 5)
    with pytest.raises(ValueError):
        invert_coupon_collector(6, 5)
    with pytest.raises(ValueError):
        invert_coupon_collector(1, 0)


def test_invert_round_trip_grid_unsaturated():
    for ndv in (10, 100, 10**3, 10**4, 10**5, 10**6):
        for n in (10, 100, 10**3, 10**4):
            m = expected_distinct(ndv, n)
            if not m < n - 0.5:
                continue
            got, saturated = invert_coupon_collector(m, n)
            assert not saturated
            assert abs(got - ndv) / ndv <= 0.01, (ndv, n, got)


# ---------------------------------------------------------------------------
# Column-level estimation


def test_min_side_wins_when_larger():
    profile = _profile([_chunk(i, b"a", b"z") for i in range(50)])  # profile is incidental
    counts = ExtremaCounts(m_min=40, m_max=38, values=frozenset(), n_groups=50)
    result = estimate_column_ndv_minmax(profile, counts)
    assert result.ndv_from_min == pytest.approx(ORACLE_INVERT_40_OF_50, rel=1e-5)
    assert result.ndv_from_max == pytest.approx(ORACLE_INVERT_38_OF_50, rel=1e-5)
    assert result.ndv_minmax == result.ndv_from_min
    assert not result.saturated


def test_constant_extrema_estimate_near_one():
    profile = _profile([_chunk(i, b"a", b"z") for i in range(50)])
    result = estimate_column_ndv_minmax(profile)
    assert result.ndv_minmax == pytest.approx(1.0, abs=0.01)


def test_sorted_ten_groups_saturates_near_n_squared():
    profile = _profile(
        [_chunk(i, f"{100 * i:04d}".encode(), f"{100 * i + 99:04d}".encode()) for i in range(10)]
    )
    result = estimate_column_ndv_minmax(profile)
    assert result.saturated
    assert result.ndv_minmax == pytest.approx(ORACLE_SATURATED_10, rel=1e-4)


def test_saturation_reflects_retained_side_only():
    profile = _profile([_chunk(i, b"a", b"z") for i in range(50)])
    # max side saturated but smaller: flag must follow the min side winner
    counts = ExtremaCounts(m_min=40, m_max=50, values=frozenset(), n_groups=50)
    result = estimate_column_ndv_minmax(profile, counts)
    assert result.ndv_minmax == result.ndv_from_max  # saturated side still wins here
    assert result.saturated
    counts = ExtremaCounts(m_min=49, m_max=10, values=frozenset(), n_groups=50)
    result = estimate_column_ndv_minmax(profile, counts)
    assert result.ndv_minmax == result.ndv_from_min
    assert not result.saturated


def test_model_world_uniform_sampling_law_light():
    # Draws-with-replacement simulation (the model's own assumption), small
    # version; the acceptance suite runs the full 1000-seed check.
    rng = np.random.default_rng(0)
    counts = [len(np.unique(rng.integers(0, 100, size=50))) for _ in range(200)]
    assert abs(float(np.mean(counts)) - 39.35) < 2.0
