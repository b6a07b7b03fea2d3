"""NDV estimation by inverting the dictionary-encoded storage size.

A dictionary-encoded column chunk stores its distinct values once plus
bit-packed indices, so the footer's uncompressed size pins down the distinct
count: size = ndv * len + (values - nulls) * ceil(log2(ndv)) / 8. Given the
size, the equation is solved for ndv per chunk and aggregated with max,
which is the least-underestimating aggregate when most distinct values
appear in most row groups.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Collection, NamedTuple

from .errors import NoDictionaryChunks, NoLengthEvidence, NotInvertible
from .footer import ColumnProfile
from .rootfind import RootProblem, solve

# Fraction of fallback-indicating ratios: estimate close to the row count
# and observed size close to plain encoding, checked together.
FALLBACK_NDV_RATIO = 0.9
FALLBACK_SIZE_BAND = (0.8, 1.2)
# Rows in non-dictionary chunks past this fraction make the whole column a
# lower-bound estimate (the writer gave up on dictionaries for most data).
NON_DICT_DOMINANCE = 0.5

LN2 = math.log(2.0)


def index_bits(ndv: float) -> int:
    """Bit width of a dictionary index for ndv entries; 0 for ndv <= 1."""
    if ndv <= 1.0:
        return 0
    return math.ceil(math.log2(ndv))


def storage_size(ndv: float, length: float, values: int, nulls: int = 0) -> float:
    """Uncompressed bytes of a dictionary-encoded chunk under the model.

    ndv * length for the dictionary page plus one ceil(log2(ndv))-bit index
    per non-null value. A single-valued chunk needs zero index bits.
    """
    if ndv < 1:
        raise ValueError(f"ndv must be >= 1, got {ndv}")
    if length <= 0:
        raise ValueError(f"length must be positive, got {length}")
    if not 0 <= nulls <= values:
        raise ValueError(f"nulls {nulls} outside [0, values={values}]")
    return ndv * length + (values - nulls) * index_bits(ndv) / 8.0


def _bucket_bounds(bits: int) -> tuple[int, int]:
    """Integer ndv range sharing one index bit width."""
    if bits == 0:
        return 1, 1
    return 2 ** (bits - 1) + 1, 2**bits


def _snap_to_bucket(root: float, size: float, non_null: int, length: float) -> int:
    """Snap a real root to the integer minimizing the size residual.

    Within one bit-width bucket the objective is linear, so the best integer
    is the rounded linear solution. Buckets adjacent to the root's are also
    tried: a root that converged onto a bit-width step can sit a hair on the
    wrong side of the power of two.
    """
    root_bits = index_bits(root)
    best: tuple[float, float, int] | None = None
    for bits in (root_bits - 1, root_bits, root_bits + 1):
        if bits < 0:
            continue
        lo, hi = _bucket_bounds(bits)
        lo, hi = max(lo, 1), min(hi, non_null)
        if lo > hi:
            continue
        exact = (size - non_null * bits / 8.0) / length
        candidate = min(max(round(exact), lo), hi)
        residual = abs(candidate * length + non_null * bits / 8.0 - size)
        key = (residual, abs(candidate - root), candidate)
        if best is None or key < best:
            best = key
    assert best is not None
    return best[2]


class InversionResult(NamedTuple):
    ndv: float
    converged: bool
    iterations: int


def invert_storage_size(
    size: float, values: int, nulls: int, length: float
) -> InversionResult:
    """Solve the storage equation for ndv on one chunk.

    Newton runs on the exact piecewise objective with the smooth derivative
    length + (values - nulls) / (8 * ndv * ln 2); the real root is then
    snapped to the best integer in its bit-width bucket. Results are clamped
    to [1, values - nulls].

    Raises NotInvertible when the size is below the single-value floor (the
    metadata cannot have come from this model) or there are no non-null rows.
    """
    non_null = values - nulls
    if non_null <= 0:
        raise NotInvertible("chunk has no non-null values")
    if size <= 0:
        raise NotInvertible(f"uncompressed size {size} not positive")
    floor = storage_size(1, length, values, nulls)
    if size < floor:
        raise NotInvertible(
            f"size {size} below single-value floor {floor} (len={length})"
        )
    if non_null == 1 or size == floor:
        return InversionResult(1.0, True, 0)
    if storage_size(non_null, length, values, nulls) <= size:
        # At or beyond the all-distinct ceiling; clamp to the row count.
        return InversionResult(float(non_null), True, 0)

    def objective(x: float) -> float:
        return x * length + non_null * index_bits(x) / 8.0 - size

    def derivative(x: float) -> float:
        return length + non_null / (8.0 * x * LN2)

    guess = min(max(size / length, 1.0), float(non_null))
    result = solve(
        RootProblem(
            objective=objective,
            derivative=derivative,
            initial_guess=guess,
            lower_bound=1.0,
            upper_bound=float(non_null),
        )
    )
    snapped = _snap_to_bucket(result.root, size, non_null, length)
    return InversionResult(float(snapped), result.converged, result.iterations)


class LengthEstimate(NamedTuple):
    mean_bytes: float
    # 0 means exact-from-schema; otherwise the count of distinct extrema the
    # mean was taken over, which doubles as a reliability indicator.
    sample_size: int


def estimate_mean_length(
    profile: ColumnProfile, distinct_extrema: Collection[object]
) -> LengthEstimate:
    """Mean value byte length for the dictionary term.

    Fixed-width types come straight from the schema. Variable-length types
    average the byte lengths of the distinct min/max values; with a single
    row group that reduces to (|min| + |max|) / 2.

    Raises NoLengthEvidence for a variable-length column with no statistics.
    """
    if profile.fixed_width is not None:
        return LengthEstimate(float(profile.fixed_width), 0)
    lengths = [len(v) for v in distinct_extrema if isinstance(v, (bytes, bytearray))]
    if not lengths:
        raise NoLengthEvidence(
            f"column {profile.column_name!r} has no extrema to measure lengths from"
        )
    return LengthEstimate(sum(lengths) / len(lengths), len(lengths))


def detect_plain_fallback(
    ndv: float, values: int, nulls: int, size: float, length: float
) -> bool:
    """True when the chunk looks plain-encoded despite dictionary encodings.

    Writers abandon the dictionary once it outgrows their page budget; the
    size then tracks raw values and the inversion saturates near the row
    count. Both indicators must agree: estimate >= 90% of non-null rows and
    size within 20% of plain encoding.
    """
    non_null = values - nulls
    if non_null <= 0:
        return False
    lo, hi = FALLBACK_SIZE_BAND
    return (
        ndv / non_null >= FALLBACK_NDV_RATIO
        and lo <= size / (non_null * length) <= hi
    )


@dataclass(frozen=True)
class DictInversionResult:
    """Column-level outcome of per-chunk storage inversion."""

    ndv_dict: float
    per_chunk_ndv: tuple[float, ...]
    mean_len: float
    len_sample_size: int
    plain_fallback: bool
    converged: bool
    iterations_max: int


def estimate_column_ndv_dict(
    profile: ColumnProfile, length_info: LengthEstimate
) -> DictInversionResult:
    """Invert every dictionary-encoded chunk and keep the maximum.

    Summing sizes across chunks would double-count the per-chunk dictionary
    term, so each chunk is inverted with its own (size, values, nulls) and
    the shared mean length. The estimate is flagged as a lower bound when
    the winning chunk trips the plain-fallback detector or when most rows
    live in chunks without dictionary encoding at all.

    Raises NoDictionaryChunks when nothing is dictionary-encoded and
    NotInvertible when every dictionary chunk rejects the model.
    """
    dict_chunks = [c for c in profile.chunks if c.dictionary_encoded]
    if not dict_chunks:
        raise NoDictionaryChunks(
            f"column {profile.column_name!r} has no dictionary-encoded chunks"
        )

    per_chunk: list[float] = []
    winner = None  # (ndv, chunk)
    converged = True
    iterations_max = 0
    for chunk in dict_chunks:
        nulls = chunk.null_count or 0
        if chunk.value_count - nulls <= 0:
            continue
        try:
            outcome = invert_storage_size(
                chunk.uncompressed_size, chunk.value_count, nulls, length_info.mean_bytes
            )
        except NotInvertible:
            continue
        per_chunk.append(outcome.ndv)
        converged = converged and outcome.converged
        iterations_max = max(iterations_max, outcome.iterations)
        if winner is None or outcome.ndv > winner[0]:
            winner = (outcome.ndv, chunk)

    if winner is None:
        raise NotInvertible(
            f"column {profile.column_name!r}: no dictionary chunk fits the storage model"
        )

    ndv, chunk = winner
    ndv = min(max(ndv, 1.0), float(max(profile.non_null_values, 1)))
    fallback = detect_plain_fallback(
        winner[0],
        chunk.value_count,
        chunk.null_count or 0,
        chunk.uncompressed_size,
        length_info.mean_bytes,
    )
    non_dict_rows = sum(
        c.value_count for c in profile.chunks if not c.dictionary_encoded
    )
    if profile.total_values > 0 and non_dict_rows / profile.total_values > NON_DICT_DOMINANCE:
        fallback = True

    return DictInversionResult(
        ndv_dict=ndv,
        per_chunk_ndv=tuple(per_chunk),
        mean_len=length_info.mean_bytes,
        len_sample_size=length_info.sample_size,
        plain_fallback=fallback,
        converged=converged,
        iterations_max=iterations_max,
    )
