"""Synthetic Parquet corpora with exact ground truth.

Generates files whose per-column distinct counts, layouts, and value-length
laws are known exactly, writes a machine-readable sidecar next to each file,
and offers a metadata-only simulator that builds the same column profiles
analytically (no I/O) for fast property sweeps. The brute-force oracle is
the one and only place in this package allowed to read data pages; it lives
behind the test/validation boundary.
"""

from __future__ import annotations

import json
import math
import string as _string
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence, Union

import numpy as np
import pyarrow as pa
import pyarrow.parquet as pq

from .dictsize import storage_size
from .errors import WriterCapability
from .footer import (
    ColumnChunkMeta,
    ColumnProfile,
    LogicalType,
    PhysicalType,
    build_profile,
    read_file_profiles,
)

SIDECAR_SCHEMA_VERSION = 1
# Parquet writers typically cap the dictionary page around a megabyte before
# falling back to plain encoding; the simulator mirrors that.
DEFAULT_DICT_PAGE_LIMIT = 1 << 20
# Byte overhead modeled for an all-null chunk (page headers + levels only).
_NULL_CHUNK_BYTES = 16

_INT_POOL_SPACE = 1 << 50
_STRING_ALPHABET = np.array(list(_string.ascii_lowercase))


class Layout(Enum):
    UNIFORM = "Uniform"
    SORTED = "Sorted"
    PARTITIONED = "Partitioned"
    CLUSTERED = "Clustered"
    SKEWED = "Skewed"


@dataclass(frozen=True)
class ColumnSpec:
    """Recipe for one synthetic column."""

    name: str
    value_type: str  # "int64" | "double" | "string"
    ndv: int
    rows: int
    row_group_rows: int
    layout: Layout = Layout.UNIFORM
    null_fraction: float = 0.0
    seed: int = 0
    zipf_s: float = 1.2
    string_len: Union[int, tuple[int, int]] = (2, 16)
    dictionary: bool = True

    def __post_init__(self):
        if self.value_type not in ("int64", "double", "string"):
            raise ValueError(f"column {self.name!r}: unknown value_type {self.value_type!r}")
        if self.rows < 1 or self.row_group_rows < 1:
            raise ValueError(f"column {self.name!r}: rows and row_group_rows must be >= 1")
        if not 0.0 <= self.null_fraction < 1.0:
            raise ValueError(f"column {self.name!r}: null_fraction must be in [0, 1)")
        if self.ndv < 1:
            raise ValueError(f"column {self.name!r}: ndv must be >= 1")
        if self.ndv > self.non_null_rows:
            raise ValueError(
                f"column {self.name!r}: ndv {self.ndv} exceeds non-null rows "
                f"{self.non_null_rows}"
            )
        if self.layout is Layout.SKEWED and self.zipf_s <= 1.0:
            raise ValueError(f"column {self.name!r}: zipf_s must be > 1")

    @property
    def null_count(self) -> int:
        return int(round(self.rows * self.null_fraction))

    @property
    def non_null_rows(self) -> int:
        return self.rows - self.null_count

    @property
    def n_groups(self) -> int:
        return math.ceil(self.rows / self.row_group_rows)


@dataclass(frozen=True)
class GroupTruth:
    rows: int
    nulls: int
    distinct: int
    min_value: object | None
    max_value: object | None


@dataclass(frozen=True)
class ColumnTruth:
    """Exact per-column facts, recomputable from the data by brute force."""

    name: str
    value_type: str
    layout: str
    rows: int
    nulls: int
    ndv_true: int
    mean_len: float
    per_group: tuple[GroupTruth, ...]
    seed: int | None = None
    requested_ndv: int | None = None


@dataclass(frozen=True)
class GroundTruth:
    file: str
    row_group_rows: int
    writer: dict
    columns: dict[str, ColumnTruth] = field(default_factory=dict)


# --------------------------------------------------------------------------
# Sampling


def _distinct_pool(spec: ColumnSpec, rng: np.random.Generator) -> np.ndarray:
    """ndv distinct values, ascending, drawn per the column's value law."""
    if spec.value_type == "int64":
        pool = np.unique(rng.integers(0, _INT_POOL_SPACE, size=3 * spec.ndv + 16, dtype=np.int64))
        while len(pool) < spec.ndv:
            extra = rng.integers(0, _INT_POOL_SPACE, size=2 * spec.ndv, dtype=np.int64)
            pool = np.unique(np.concatenate([pool, extra]))
        return np.sort(rng.permutation(pool)[: spec.ndv])
    if spec.value_type == "double":
        pool = np.unique(rng.random(3 * spec.ndv + 16))
        while len(pool) < spec.ndv:
            pool = np.unique(np.concatenate([pool, rng.random(2 * spec.ndv)]))
        return np.sort(rng.permutation(pool)[: spec.ndv])
    # strings under the configured length law
    if isinstance(spec.string_len, int):
        lo = hi = spec.string_len
    else:
        lo, hi = spec.string_len
    seen: set[str] = set()
    out: list[str] = []
    while len(out) < spec.ndv:
        length = int(rng.integers(lo, hi + 1))
        value = "".join(rng.choice(_STRING_ALPHABET, size=length))
        if value not in seen:
            seen.add(value)
            out.append(value)
    return np.sort(np.array(out))


def _even_counts(total: int, parts: int) -> np.ndarray:
    counts = np.full(parts, total // parts, dtype=np.int64)
    counts[: total % parts] += 1
    return counts


def _group_slot_counts(spec: ColumnSpec, null_mask: np.ndarray) -> list[int]:
    """Non-null slots per row group, in file order."""
    counts = []
    for start in range(0, spec.rows, spec.row_group_rows):
        stop = min(start + spec.row_group_rows, spec.rows)
        counts.append(int((~null_mask[start:stop]).sum()))
    return counts


def _arrange(spec: ColumnSpec, pool: np.ndarray, null_mask: np.ndarray,
             rng: np.random.Generator) -> np.ndarray:
    """Non-null value sequence (file order) realizing the layout."""
    total = spec.rows - int(null_mask.sum())
    if spec.layout is Layout.UNIFORM:
        seq = np.concatenate([pool, rng.choice(pool, size=total - len(pool))])
        rng.shuffle(seq)
        return seq
    if spec.layout is Layout.SORTED:
        return np.repeat(pool, _even_counts(total, len(pool)))
    if spec.layout is Layout.PARTITIONED:
        # Each row group receives one contiguous slice of the sorted
        # multiset, but the slices land on groups in a random order, so
        # ranges stay disjoint while midpoints lose monotonicity.
        ordered = np.repeat(pool, _even_counts(total, len(pool)))
        slots = _group_slot_counts(spec, null_mask)
        order = rng.permutation(len(slots))
        pieces: list[np.ndarray | None] = [None] * len(slots)
        cursor = 0
        for rank in order:
            size = slots[rank]
            piece = ordered[cursor : cursor + size].copy()
            rng.shuffle(piece)
            pieces[rank] = piece
            cursor += size
        return np.concatenate([p for p in pieces if p is not None and len(p)])
    if spec.layout is Layout.CLUSTERED:
        # Runs of a single value; every pool value gets at least one run.
        target_run = 32
        n_runs = max(len(pool), total // target_run)
        run_values = np.concatenate(
            [rng.permutation(pool), rng.choice(pool, size=n_runs - len(pool))]
        )
        rng.shuffle(run_values)
        return np.repeat(run_values, _even_counts(total, n_runs))
    if spec.layout is Layout.SKEWED:
        perm = rng.permutation(len(pool))
        idx = (rng.zipf(spec.zipf_s, size=total) - 1) % len(pool)
        return pool[perm[idx]]
    raise ValueError(f"unhandled layout {spec.layout}")


def sample_column(spec: ColumnSpec) -> tuple[np.ndarray, np.ndarray]:
    """Deterministically sample (non-null values in file order, null mask)."""
    rng = np.random.default_rng(spec.seed)
    null_mask = np.zeros(spec.rows, dtype=bool)
    if spec.null_count:
        null_mask[rng.choice(spec.rows, size=spec.null_count, replace=False)] = True
    pool = _distinct_pool(spec, rng)
    values = _arrange(spec, pool, null_mask, rng)
    return values, null_mask


# --------------------------------------------------------------------------
# Ground truth over sampled arrays


def _encoded_length(spec: ColumnSpec, value) -> int:
    if spec.value_type == "string":
        return len(str(value).encode("utf-8"))
    return 8


def _json_value(spec: ColumnSpec, value):
    if spec.value_type == "int64":
        return int(value)
    if spec.value_type == "double":
        return float(value)
    return str(value)


def _column_truth(spec: ColumnSpec, values: np.ndarray, null_mask: np.ndarray) -> ColumnTruth:
    distinct = np.unique(values)
    mean_len = sum(_encoded_length(spec, v) for v in distinct) / len(distinct)
    per_group = []
    nn_cursor = 0
    for start in range(0, spec.rows, spec.row_group_rows):
        stop = min(start + spec.row_group_rows, spec.rows)
        group_rows = stop - start
        group_nulls = int(null_mask[start:stop].sum())
        group_values = values[nn_cursor : nn_cursor + group_rows - group_nulls]
        nn_cursor += group_rows - group_nulls
        if len(group_values):
            group_distinct = np.unique(group_values)  # sorted: ends are extrema
            per_group.append(
                GroupTruth(
                    rows=group_rows,
                    nulls=group_nulls,
                    distinct=int(len(group_distinct)),
                    min_value=_json_value(spec, group_distinct[0]),
                    max_value=_json_value(spec, group_distinct[-1]),
                )
            )
        else:
            per_group.append(GroupTruth(group_rows, group_nulls, 0, None, None))
    return ColumnTruth(
        name=spec.name,
        value_type=spec.value_type,
        layout=spec.layout.value,
        rows=spec.rows,
        nulls=int(null_mask.sum()),
        ndv_true=int(len(distinct)),
        mean_len=mean_len,
        per_group=tuple(per_group),
        seed=spec.seed,
        requested_ndv=spec.ndv,
    )


# --------------------------------------------------------------------------
# File generation


def _arrow_array(spec: ColumnSpec, values: np.ndarray, null_mask: np.ndarray) -> pa.Array:
    arrow_type = {
        "int64": pa.int64(),
        "double": pa.float64(),
        "string": pa.string(),
    }[spec.value_type]
    if not null_mask.any():
        return pa.array(values, type=arrow_type)
    full = np.zeros(spec.rows, dtype=values.dtype)
    full[~null_mask] = values
    return pa.array(full, type=arrow_type, mask=null_mask)


def sidecar_path(parquet_path: Union[str, Path]) -> Path:
    parquet_path = Path(parquet_path)
    return parquet_path.with_name(parquet_path.stem + ".sidecar.json")


def _truth_to_json(truth: GroundTruth) -> dict:
    return {
        "schema_version": SIDECAR_SCHEMA_VERSION,
        "file": truth.file,
        "row_group_rows": truth.row_group_rows,
        "writer": truth.writer,
        "columns": {
            name: {
                "value_type": col.value_type,
                "layout": col.layout,
                "rows": col.rows,
                "nulls": col.nulls,
                "ndv_true": col.ndv_true,
                "requested_ndv": col.requested_ndv,
                "mean_len": col.mean_len,
                "seed": col.seed,
                "per_group": [
                    {
                        "rows": g.rows,
                        "nulls": g.nulls,
                        "distinct": g.distinct,
                        "min": g.min_value,
                        "max": g.max_value,
                    }
                    for g in col.per_group
                ],
            }
            for name, col in truth.columns.items()
        },
    }


def _truth_from_json(doc: dict) -> GroundTruth:
    columns = {}
    for name, col in doc["columns"].items():
        columns[name] = ColumnTruth(
            name=name,
            value_type=col["value_type"],
            layout=col["layout"],
            rows=col["rows"],
            nulls=col["nulls"],
            ndv_true=col["ndv_true"],
            mean_len=col["mean_len"],
            per_group=tuple(
                GroupTruth(g["rows"], g["nulls"], g["distinct"], g["min"], g["max"])
                for g in col["per_group"]
            ),
            seed=col.get("seed"),
            requested_ndv=col.get("requested_ndv"),
        )
    return GroundTruth(
        file=doc["file"],
        row_group_rows=doc["row_group_rows"],
        writer=doc["writer"],
        columns=columns,
    )


def load_sidecar(path: Union[str, Path]) -> GroundTruth:
    with open(path, "r", encoding="utf-8") as fh:
        return _truth_from_json(json.load(fh))


def generate_file(
    specs: Sequence[ColumnSpec],
    path: Union[str, Path],
    compression: str = "none",
    dictionary_page_limit: int | None = None,
) -> GroundTruth:
    """Write a Parquet file plus its ground-truth sidecar.

    All columns of one file must agree on rows and row_group_rows.
    Generation is deterministic in each column's seed. Statistics and (per
    column) dictionary encoding are pinned on; the writer settings land in
    the sidecar so accuracy numbers stay attributable.

    Raises WriterCapability if the written footer lacks statistics the
    estimators rely on.
    """
    if not specs:
        raise ValueError("need at least one column spec")
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate column names in spec: {names}")
    rows, rg_rows = specs[0].rows, specs[0].row_group_rows
    for s in specs:
        if (s.rows, s.row_group_rows) != (rows, rg_rows):
            raise ValueError(
                f"column {s.name!r}: rows/row_group_rows differ from {specs[0].name!r}"
            )

    path = Path(path)
    arrays, truths = {}, {}
    for spec in specs:
        values, null_mask = sample_column(spec)
        arrays[spec.name] = _arrow_array(spec, values, null_mask)
        truths[spec.name] = _column_truth(spec, values, null_mask)

    table = pa.table(arrays)
    dict_columns = [s.name for s in specs if s.dictionary]
    use_dictionary: Union[bool, list[str]]
    if len(dict_columns) == len(specs):
        use_dictionary = True
    elif not dict_columns:
        use_dictionary = False
    else:
        use_dictionary = dict_columns
    writer_kwargs = {}
    if dictionary_page_limit is not None:
        writer_kwargs["dictionary_pagesize_limit"] = dictionary_page_limit
    pq.write_table(
        table,
        path,
        row_group_size=rg_rows,
        use_dictionary=use_dictionary,
        write_statistics=True,
        compression=compression,
        **writer_kwargs,
    )

    _verify_written_footer(path, specs)

    truth = GroundTruth(
        file=path.name,
        row_group_rows=rg_rows,
        writer={
            "library": "pyarrow",
            "version": pa.__version__,
            "compression": compression,
            "dictionary_page_limit_bytes": dictionary_page_limit or DEFAULT_DICT_PAGE_LIMIT,
            "write_statistics": True,
        },
        columns=truths,
    )
    with open(sidecar_path(path), "w", encoding="utf-8") as fh:
        json.dump(_truth_to_json(truth), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return truth


def _verify_written_footer(path: Path, specs: Sequence[ColumnSpec]) -> None:
    by_name = {s.name: s for s in specs}
    for profile in read_file_profiles(path):
        spec = by_name.get(profile.column_name)
        if spec is None:
            continue
        for chunk in profile.chunks:
            if chunk.non_null_count > 0 and not chunk.has_statistics:
                raise WriterCapability(
                    f"writer produced no statistics for column {profile.column_name!r} "
                    f"row group {chunk.row_group_index}"
                )


# --------------------------------------------------------------------------
# Metadata-only simulation


_TYPE_MAP = {
    "int64": (PhysicalType.INT64, LogicalType.INTEGER, 8),
    "double": (PhysicalType.DOUBLE, LogicalType.FLOAT, 8),
    "string": (PhysicalType.BYTE_ARRAY, LogicalType.STRING, None),
}


def _raw_stat(spec_type: str, value):
    if value is None:
        return None
    if spec_type == "int64":
        return int(value)
    if spec_type == "double":
        return float(value)
    return str(value).encode("utf-8")


def simulate_profile(
    spec: ColumnSpec, dict_threshold_bytes: int = DEFAULT_DICT_PAGE_LIMIT
) -> ColumnProfile:
    """Analytic twin of a generated column's footer profile; no file I/O.

    Chunk sizes follow the storage model exactly, using each chunk's true
    distinct count and (for strings) the chunk-local mean distinct length.
    A chunk whose dictionary would outgrow the writer threshold gets the
    plain-encoded size instead, mirroring the real fallback.
    """
    values, null_mask = sample_column(spec)
    physical, logical, fixed_width = _TYPE_MAP[spec.value_type]
    chunks = []
    nn_cursor = 0
    for rg_index, start in enumerate(range(0, spec.rows, spec.row_group_rows)):
        stop = min(start + spec.row_group_rows, spec.rows)
        group_rows = stop - start
        group_nulls = int(null_mask[start:stop].sum())
        non_null = group_rows - group_nulls
        group_values = values[nn_cursor : nn_cursor + non_null]
        nn_cursor += non_null
        if non_null == 0:
            chunks.append(
                ColumnChunkMeta(
                    row_group_index=rg_index,
                    uncompressed_size=_NULL_CHUNK_BYTES,
                    value_count=group_rows,
                    null_count=group_nulls,
                    min_value=None,
                    max_value=None,
                    dictionary_encoded=spec.dictionary,
                    physical_type=physical,
                )
            )
            continue
        distinct = np.unique(group_values)  # sorted: ends are extrema
        if fixed_width is not None:
            mean_len = float(fixed_width)
        else:
            mean_len = sum(len(str(v).encode("utf-8")) for v in distinct) / len(distinct)
        if spec.dictionary and len(distinct) * mean_len <= dict_threshold_bytes:
            size = storage_size(len(distinct), mean_len, group_rows, group_nulls)
        else:
            size = non_null * mean_len
        chunks.append(
            ColumnChunkMeta(
                row_group_index=rg_index,
                uncompressed_size=int(round(size)),
                value_count=group_rows,
                null_count=group_nulls,
                min_value=_raw_stat(spec.value_type, distinct[0]),
                max_value=_raw_stat(spec.value_type, distinct[-1]),
                dictionary_encoded=spec.dictionary,
                physical_type=physical,
            )
        )
    return build_profile(spec.name, chunks, fixed_width, logical)


def profile_from_ground_truth(truth: ColumnTruth) -> ColumnProfile:
    """Model-world profile rebuilt from a sidecar: exact storage model sizes.

    Estimates computed on this profile carry zero writer overhead, which is
    what makes observed-vs-model comparisons isolate the writer bias.
    """
    physical, logical, fixed_width = _TYPE_MAP[truth.value_type]
    chunks = []
    for rg_index, group in enumerate(truth.per_group):
        non_null = group.rows - group.nulls
        if non_null == 0 or group.distinct == 0:
            size = _NULL_CHUNK_BYTES
        else:
            size = storage_size(group.distinct, truth.mean_len, group.rows, group.nulls)
        chunks.append(
            ColumnChunkMeta(
                row_group_index=rg_index,
                uncompressed_size=int(round(size)),
                value_count=group.rows,
                null_count=group.nulls,
                min_value=_raw_stat(truth.value_type, group.min_value),
                max_value=_raw_stat(truth.value_type, group.max_value),
                dictionary_encoded=True,
                physical_type=physical,
            )
        )
    return build_profile(truth.name, chunks, fixed_width, logical)


# --------------------------------------------------------------------------
# Brute-force oracle (the only data-page reader in the package)


def brute_force_oracle(path: Union[str, Path]) -> dict[str, ColumnTruth]:
    """Exact per-column facts by full scan; for tests and validation only."""
    pf = pq.ParquetFile(path)
    schema = pf.schema_arrow
    out: dict[str, ColumnTruth] = {}
    for name in schema.names:
        typ = schema.field(name).type
        if pa.types.is_integer(typ):
            value_type = "int64"
        elif pa.types.is_floating(typ):
            value_type = "double"
        else:
            value_type = "string"
        per_group = []
        all_distinct: set = set()
        rows = nulls = 0
        for rg in range(pf.metadata.num_row_groups):
            column = pf.read_row_group(rg, columns=[name]).column(0)
            values = [v for v in column.to_pylist() if v is not None]
            group_rows = len(column)
            group_nulls = group_rows - len(values)
            rows += group_rows
            nulls += group_nulls
            distinct = set(values)
            all_distinct |= distinct
            per_group.append(
                GroupTruth(
                    rows=group_rows,
                    nulls=group_nulls,
                    distinct=len(distinct),
                    min_value=min(values) if values else None,
                    max_value=max(values) if values else None,
                )
            )
        if value_type == "string":
            mean_len = (
                sum(len(str(v).encode("utf-8")) for v in all_distinct) / len(all_distinct)
                if all_distinct
                else 0.0
            )
        else:
            mean_len = 8.0
        out[name] = ColumnTruth(
            name=name,
            value_type=value_type,
            layout="unknown",
            rows=rows,
            nulls=nulls,
            ndv_true=len(all_distinct),
            mean_len=mean_len,
            per_group=tuple(per_group),
        )
    return out
