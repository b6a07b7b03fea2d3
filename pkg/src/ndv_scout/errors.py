"""Exception types shared across the estimation pipeline."""


class NdvScoutError(Exception):
    """Base class for all ndv-scout errors."""


class MalformedFooter(NdvScoutError):
    """File tail is not a structurally valid Parquet footer."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class UnsupportedFeature(NdvScoutError):
    """Footer uses a feature we do not read (e.g. footer encryption)."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class UninterpretableStatistic(NdvScoutError):
    """A min/max statistic has no order-preserving numeric key."""


class NoSignChange(NdvScoutError):
    """Objective does not bracket a root and Newton left the interval."""


class NonFinite(NdvScoutError):
    """Objective or derivative returned NaN or infinity."""


class NotInvertible(NdvScoutError):
    """Chunk metadata is inconsistent with the dictionary storage model."""


class NoLengthEvidence(NdvScoutError):
    """Variable-length column with no statistics to estimate value length from."""


class NoDictionaryChunks(NdvScoutError):
    """Column has no dictionary-encoded chunks to invert."""


class NoStatistics(NdvScoutError):
    """Column has no chunk with min/max statistics."""


class Unanalyzable(NdvScoutError):
    """Too few ranges (or no interpretable keys) for layout analysis."""


class NoEstimate(NdvScoutError):
    """Neither estimation path produced a value for the column."""

    def __init__(self, message: str, reason: str):
        super().__init__(message)
        self.reason = reason


class WriterCapability(NdvScoutError):
    """The Parquet writer could not honor a requested generation setting."""
