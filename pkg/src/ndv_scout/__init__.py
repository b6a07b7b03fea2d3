"""Metadata-only NDV estimation for Parquet files.

Estimates the number of distinct values per column from footer metadata
alone: dictionary-encoded chunk sizes pin NDV down where values are spread
across row groups, and the diversity of row-group min/max statistics covers
sorted and partitioned layouts. No data page is ever read.
"""

from .combine import (
    BatchMemoryEstimate,
    EstimateDiagnostics,
    NdvEstimate,
    SchemaConstraints,
    batch_dictionary_size,
    combine,
    total_batch_memory,
    type_upper_bound,
)
from .dictsize import (
    DictInversionResult,
    LengthEstimate,
    detect_plain_fallback,
    estimate_column_ndv_dict,
    estimate_mean_length,
    invert_storage_size,
    storage_size,
)
from .errors import (
    MalformedFooter,
    NdvScoutError,
    NoDictionaryChunks,
    NoEstimate,
    NoLengthEvidence,
    NonFinite,
    NoSignChange,
    NoStatistics,
    NotInvertible,
    Unanalyzable,
    UninterpretableStatistic,
    UnsupportedFeature,
    WriterCapability,
)
from .extrema import (
    ExtremaCounts,
    MinMaxDiversityResult,
    count_distinct_extrema,
    estimate_column_ndv_minmax,
    expected_distinct,
    invert_coupon_collector,
)
from .footer import (
    ColumnChunkMeta,
    ColumnProfile,
    LogicalType,
    PhysicalType,
    StatsCompleteness,
    build_profile,
    interpret_ordering_key,
    read_file_profiles,
)
from .layout import (
    DistributionReport,
    LayoutClass,
    analyze_profile,
    classify,
    monotonicity,
    overlap_ratio,
)
from .pipeline import ColumnAssessment, assess_file, assess_profile
from .rootfind import RootProblem, RootResult, solve
from .validate import ValidationReport, validate_corpus, validate_pair

__version__ = "0.1.0"

__all__ = [
    "BatchMemoryEstimate",
    "ColumnAssessment",
    "ColumnChunkMeta",
    "ColumnProfile",
    "DictInversionResult",
    "DistributionReport",
    "EstimateDiagnostics",
    "ExtremaCounts",
    "LayoutClass",
    "LengthEstimate",
    "LogicalType",
    "MalformedFooter",
    "MinMaxDiversityResult",
    "NdvEstimate",
    "NdvScoutError",
    "NoDictionaryChunks",
    "NoEstimate",
    "NoLengthEvidence",
    "NonFinite",
    "NoSignChange",
    "NoStatistics",
    "NotInvertible",
    "PhysicalType",
    "RootProblem",
    "RootResult",
    "SchemaConstraints",
    "StatsCompleteness",
    "Unanalyzable",
    "UninterpretableStatistic",
    "UnsupportedFeature",
    "ValidationReport",
    "WriterCapability",
    "analyze_profile",
    "assess_file",
    "assess_profile",
    "batch_dictionary_size",
    "build_profile",
    "classify",
    "combine",
    "count_distinct_extrema",
    "detect_plain_fallback",
    "estimate_column_ndv_dict",
    "estimate_column_ndv_minmax",
    "estimate_mean_length",
    "expected_distinct",
    "interpret_ordering_key",
    "invert_coupon_collector",
    "invert_storage_size",
    "monotonicity",
    "overlap_ratio",
    "read_file_profiles",
    "solve",
    "storage_size",
    "total_batch_memory",
    "type_upper_bound",
    "validate_corpus",
    "validate_pair",
]
