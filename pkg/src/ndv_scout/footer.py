"""Parquet footer ingestion: column profiles from metadata only.

Reads exactly two byte ranges from a file: the 8-byte tail (footer length +
magic) and the footer region itself. Data pages are never touched, which is
the whole point — estimation cost must not scale with file size.

The Thrift-encoded FileMetaData blob is decoded by handing pyarrow a tiny
in-memory file assembled from the footer bytes, so the battle-tested decoder
does the struct walking while this module keeps full control of file I/O.
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import BinaryIO, Iterable, Union

import pyarrow.parquet as pq

from .errors import MalformedFooter, UninterpretableStatistic, UnsupportedFeature

MAGIC = b"PAR1"
ENCRYPTED_MAGIC = b"PARE"
_DICTIONARY_ENCODINGS = frozenset({"PLAIN_DICTIONARY", "RLE_DICTIONARY"})

ByteSource = Union[str, Path, BinaryIO]


class PhysicalType(Enum):
    BOOLEAN = "BOOLEAN"
    INT32 = "INT32"
    INT64 = "INT64"
    INT96 = "INT96"
    FLOAT = "FLOAT"
    DOUBLE = "DOUBLE"
    BYTE_ARRAY = "BYTE_ARRAY"
    FIXED_LEN_BYTE_ARRAY = "FIXED_LEN_BYTE_ARRAY"


class LogicalType(Enum):
    INTEGER = "INTEGER"
    FLOAT = "FLOAT"
    DATE = "DATE"
    TIMESTAMP = "TIMESTAMP"
    STRING = "STRING"
    BINARY = "BINARY"
    BOOLEAN = "BOOLEAN"
    DECIMAL = "DECIMAL"
    OTHER = "OTHER"


_FIXED_WIDTHS = {
    PhysicalType.BOOLEAN: 1,
    PhysicalType.INT32: 4,
    PhysicalType.INT64: 8,
    PhysicalType.INT96: 12,
    PhysicalType.FLOAT: 4,
    PhysicalType.DOUBLE: 8,
}

# pyarrow logical-type tags -> our logical classes; anything else falls
# through to a physical-type default.
_LOGICAL_FROM_TAG = {
    "STRING": LogicalType.STRING,
    "ENUM": LogicalType.STRING,
    "DATE": LogicalType.DATE,
    "TIMESTAMP": LogicalType.TIMESTAMP,
    "INT": LogicalType.INTEGER,
    "DECIMAL": LogicalType.DECIMAL,
}

_LOGICAL_FROM_PHYSICAL = {
    PhysicalType.BOOLEAN: LogicalType.BOOLEAN,
    PhysicalType.INT32: LogicalType.INTEGER,
    PhysicalType.INT64: LogicalType.INTEGER,
    PhysicalType.FLOAT: LogicalType.FLOAT,
    PhysicalType.DOUBLE: LogicalType.FLOAT,
    PhysicalType.BYTE_ARRAY: LogicalType.BINARY,
    PhysicalType.FIXED_LEN_BYTE_ARRAY: LogicalType.BINARY,
    PhysicalType.INT96: LogicalType.OTHER,
}


@dataclass(frozen=True)
class ColumnChunkMeta:
    """Footer facts for one column within one row group."""

    row_group_index: int
    uncompressed_size: int
    value_count: int
    null_count: int | None
    min_value: object | None
    max_value: object | None
    dictionary_encoded: bool
    physical_type: PhysicalType

    @property
    def has_statistics(self) -> bool:
        return self.min_value is not None and self.max_value is not None

    @property
    def non_null_count(self) -> int:
        return self.value_count - (self.null_count or 0)


@dataclass(frozen=True)
class StatsCompleteness:
    """How much of the optional footer metadata was actually present."""

    chunks: int
    with_min_max: int
    with_null_count: int


@dataclass(frozen=True)
class ColumnProfile:
    """Ordered chunk metadata for one leaf column; input to all estimators."""

    column_name: str
    chunks: tuple[ColumnChunkMeta, ...]
    total_values: int
    total_nulls: int
    fixed_width: int | None
    logical_type: LogicalType
    stats_completeness: StatsCompleteness

    def __post_init__(self):
        if not self.chunks:
            raise ValueError(f"column {self.column_name!r}: profile needs >= 1 chunk")
        indices = [c.row_group_index for c in self.chunks]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError(
                f"column {self.column_name!r}: row_group_index not strictly increasing"
            )
        if self.total_values != sum(c.value_count for c in self.chunks):
            raise ValueError(f"column {self.column_name!r}: total_values mismatch")

    @property
    def physical_type(self) -> PhysicalType:
        return self.chunks[0].physical_type

    @property
    def non_null_values(self) -> int:
        return self.total_values - self.total_nulls

    def chunks_with_statistics(self) -> tuple[ColumnChunkMeta, ...]:
        return tuple(c for c in self.chunks if c.has_statistics)


def build_profile(
    column_name: str,
    chunks: Iterable[ColumnChunkMeta],
    fixed_width: int | None,
    logical_type: LogicalType,
) -> ColumnProfile:
    """Assemble a profile, treating absent null counts as zero nulls."""
    chunk_tuple = tuple(chunks)
    completeness = StatsCompleteness(
        chunks=len(chunk_tuple),
        with_min_max=sum(1 for c in chunk_tuple if c.has_statistics),
        with_null_count=sum(1 for c in chunk_tuple if c.null_count is not None),
    )
    return ColumnProfile(
        column_name=column_name,
        chunks=chunk_tuple,
        total_values=sum(c.value_count for c in chunk_tuple),
        total_nulls=sum(c.null_count or 0 for c in chunk_tuple),
        fixed_width=fixed_width,
        logical_type=logical_type,
        stats_completeness=completeness,
    )


def _read_footer_blob(source: BinaryIO) -> tuple[bytes, int]:
    """Return (footer bytes, file size), touching only the footer region."""
    size = source.seek(0, io.SEEK_END)
    if size < 12:
        raise MalformedFooter(f"file too small for a Parquet footer ({size} bytes)")

    source.seek(size - 8)
    tail = source.read(8)
    if len(tail) != 8:
        raise MalformedFooter("short read on 8-byte tail", offset=size - 8)
    magic = tail[4:]
    if magic == ENCRYPTED_MAGIC:
        raise UnsupportedFeature("encrypted footer (PARE magic)", offset=size - 4)
    if magic != MAGIC:
        raise MalformedFooter(f"bad footer magic {magic!r}", offset=size - 4)

    (footer_len,) = struct.unpack("<I", tail[:4])
    if footer_len <= 0 or footer_len > size - 12:
        raise MalformedFooter(
            f"footer length {footer_len} inconsistent with file size {size}",
            offset=size - 8,
        )

    source.seek(size - 8 - footer_len)
    footer = source.read(footer_len)
    if len(footer) != footer_len:
        raise MalformedFooter("short read on footer region", offset=size - 8 - footer_len)
    return footer, size


def _decode_file_metadata(footer: bytes, footer_offset: int):
    """Decode a raw FileMetaData blob via pyarrow on an in-memory stub file."""
    stub = MAGIC + footer + struct.pack("<I", len(footer)) + MAGIC
    try:
        return pq.read_metadata(io.BytesIO(stub))
    except Exception as exc:
        raise MalformedFooter(
            f"Thrift decode failed: {exc}", offset=footer_offset
        ) from exc


def _logical_type(schema_column, physical: PhysicalType) -> LogicalType:
    tag = schema_column.logical_type.type
    mapped = _LOGICAL_FROM_TAG.get(tag)
    if mapped is not None:
        return mapped
    if tag == "NONE":
        return _LOGICAL_FROM_PHYSICAL[physical]
    return LogicalType.OTHER


def read_file_profiles(source: ByteSource) -> list[ColumnProfile]:
    """Parse a Parquet footer into one profile per leaf column.

    Accepts a path or a seekable binary file object. Only the footer byte
    range [size - 8 - footer_len, size) is ever read. Files with zero row
    groups yield an empty list.

    Raises MalformedFooter for structural damage and UnsupportedFeature for
    encrypted footers.
    """
    if isinstance(source, (str, Path)):
        with open(source, "rb") as fh:
            return read_file_profiles(fh)

    footer, size = _read_footer_blob(source)
    meta = _decode_file_metadata(footer, footer_offset=size - 8 - len(footer))

    if meta.num_row_groups == 0 or meta.num_columns == 0:
        return []

    profiles: list[ColumnProfile] = []
    for col_idx in range(meta.num_columns):
        schema_col = meta.schema.column(col_idx)
        chunks: list[ColumnChunkMeta] = []
        name = None
        for rg_idx in range(meta.num_row_groups):
            col = meta.row_group(rg_idx).column(col_idx)
            if name is None:
                name = col.path_in_schema
            physical = PhysicalType(col.physical_type)
            stats = col.statistics if col.is_stats_set else None
            has_min_max = stats is not None and stats.has_min_max
            chunks.append(
                ColumnChunkMeta(
                    row_group_index=rg_idx,
                    uncompressed_size=col.total_uncompressed_size,
                    value_count=col.num_values,
                    null_count=(
                        stats.null_count
                        if stats is not None and stats.has_null_count
                        else None
                    ),
                    min_value=stats.min_raw if has_min_max else None,
                    max_value=stats.max_raw if has_min_max else None,
                    dictionary_encoded=bool(
                        _DICTIONARY_ENCODINGS.intersection(col.encodings)
                    ),
                    physical_type=physical,
                )
            )
        physical = chunks[0].physical_type
        if physical is PhysicalType.FIXED_LEN_BYTE_ARRAY:
            fixed_width = schema_col.length or None
        else:
            fixed_width = _FIXED_WIDTHS.get(physical)
        profiles.append(
            build_profile(
                column_name=name or schema_col.name,
                chunks=chunks,
                fixed_width=fixed_width,
                logical_type=_logical_type(schema_col, physical),
            )
        )
    return profiles


def interpret_ordering_key(
    raw: object,
    physical_type: PhysicalType,
    logical_type: LogicalType = LogicalType.OTHER,
) -> float | int:
    """Map a raw min/max statistic to an order-preserving numeric key.

    Numeric types map to their value, DATE/TIMESTAMP to their integer epoch
    representation, and byte strings to the first 8 bytes read as an unsigned
    big-endian integer (zero-padded on the right) so lexicographic order is
    preserved. Keys are only meaningful relative to other keys of the same
    column; their magnitudes carry no unit.

    Raises UninterpretableStatistic when no order-preserving key exists
    (INT96, DECIMAL over byte arrays, NaN).
    """
    if raw is None:
        raise UninterpretableStatistic("missing statistic value")
    if physical_type is PhysicalType.INT96:
        raise UninterpretableStatistic("INT96 has no defined statistic ordering")
    if physical_type is PhysicalType.BOOLEAN:
        return int(bool(raw))
    if physical_type in (PhysicalType.INT32, PhysicalType.INT64):
        return int(raw)
    if physical_type in (PhysicalType.FLOAT, PhysicalType.DOUBLE):
        value = float(raw)
        if value != value:  # NaN
            raise UninterpretableStatistic("NaN statistic has no ordering")
        return value
    # Byte-array family. Signed decimal payloads would need two's-complement
    # handling that the unsigned prefix cannot provide.
    if logical_type is LogicalType.DECIMAL:
        raise UninterpretableStatistic("DECIMAL over byte arrays is sign-ambiguous")
    if not isinstance(raw, (bytes, bytearray)):
        raise UninterpretableStatistic(f"unexpected statistic type {type(raw).__name__}")
    prefix = bytes(raw[:8]).ljust(8, b"\x00")
    return int.from_bytes(prefix, "big")
