"""Accuracy evaluation of estimates against corpus ground truth.

For every file+sidecar pair the estimators run twice per column: once on
the real footer (file world) and once on a profile rebuilt from the sidecar
through the exact storage model (model world). The gap between the two is
the writer overhead — page headers, length prefixes, level runs — measured
rather than corrected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from . import synth
from .dictsize import storage_size
from .pipeline import ColumnAssessment, assess_profile
from .footer import read_file_profiles

METHODS = ("dict", "minmax", "hybrid")


@dataclass(frozen=True)
class MethodEstimates:
    dict_ndv: float | None
    minmax_ndv: float | None
    hybrid_ndv: float | None

    def value(self, method: str) -> float | None:
        return {
            "dict": self.dict_ndv,
            "minmax": self.minmax_ndv,
            "hybrid": self.hybrid_ndv,
        }[method]


@dataclass(frozen=True)
class ColumnValidation:
    file: str
    column: str
    layout: str
    ndv_true: int
    detected_class: str
    file_estimates: MethodEstimates
    model_estimates: MethodEstimates
    # Observed dictionary-chunk bytes over exact model bytes; > 1 means the
    # writer spends more than the model knows about.
    writer_size_ratio: float | None
    is_lower_bound: bool

    def error(self, method: str, world: str = "file") -> float | None:
        estimates = self.file_estimates if world == "file" else self.model_estimates
        value = estimates.value(method)
        if value is None:
            return None
        return abs(value - self.ndv_true) / self.ndv_true

    @property
    def writer_estimate_bias(self) -> float | None:
        """Estimate shift attributable to writer overhead, in truth units."""
        f = self.file_estimates.dict_ndv
        m = self.model_estimates.dict_ndv
        if f is None or m is None:
            return None
        return (f - m) / self.ndv_true


@dataclass(frozen=True)
class LayoutSummary:
    layout: str
    columns: int
    median_error: dict[str, float | None]
    p90_error: dict[str, float | None]
    model_median_error: dict[str, float | None]
    model_p90_error: dict[str, float | None]


@dataclass
class ValidationReport:
    columns: list[ColumnValidation] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    def summaries(self) -> list[LayoutSummary]:
        by_layout: dict[str, list[ColumnValidation]] = {}
        for col in self.columns:
            by_layout.setdefault(col.layout, []).append(col)
        out = []
        for layout in sorted(by_layout):
            cols = by_layout[layout]
            out.append(
                LayoutSummary(
                    layout=layout,
                    columns=len(cols),
                    median_error=_aggregate(cols, "file", np.median),
                    p90_error=_aggregate(cols, "file", _p90),
                    model_median_error=_aggregate(cols, "model", np.median),
                    model_p90_error=_aggregate(cols, "model", _p90),
                )
            )
        return out

    def confusion(self) -> dict[str, dict[str, int]]:
        """Counts of detected layout class per generated layout label."""
        table: dict[str, dict[str, int]] = {}
        for col in self.columns:
            row = table.setdefault(col.layout, {})
            row[col.detected_class] = row.get(col.detected_class, 0) + 1
        return table

    def to_json_dict(self) -> dict:
        return {
            "schema_version": 1,
            "columns": [
                {
                    "file": c.file,
                    "column": c.column,
                    "layout": c.layout,
                    "ndv_true": c.ndv_true,
                    "detected_class": c.detected_class,
                    "is_lower_bound": c.is_lower_bound,
                    "estimates": {
                        "file": _estimates_json(c.file_estimates),
                        "model": _estimates_json(c.model_estimates),
                    },
                    "relative_error": {
                        "file": {m: c.error(m, "file") for m in METHODS},
                        "model": {m: c.error(m, "model") for m in METHODS},
                    },
                    "writer_overhead": {
                        "size_ratio": c.writer_size_ratio,
                        "estimate_bias": c.writer_estimate_bias,
                    },
                }
                for c in self.columns
            ],
            "summary_by_layout": [
                {
                    "layout": s.layout,
                    "columns": s.columns,
                    "median_error": s.median_error,
                    "p90_error": s.p90_error,
                    "model_median_error": s.model_median_error,
                    "model_p90_error": s.model_p90_error,
                }
                for s in self.summaries()
            ],
            "classifier_confusion": self.confusion(),
            "skipped_files": sorted(self.skipped),
        }

    def to_table(self) -> str:
        lines = []
        header = (
            f"{'layout':<12} {'cols':>4}  "
            f"{'dict med/p90':>16}  {'minmax med/p90':>16}  {'hybrid med/p90':>16}"
        )
        lines.append(header)
        lines.append("-" * len(header))
        for s in self.summaries():
            cells = []
            for method in METHODS:
                med, p90 = s.median_error[method], s.p90_error[method]
                cells.append(f"{_pct(med)}/{_pct(p90)}".rjust(16))
            lines.append(f"{s.layout:<12} {s.columns:>4}  " + "  ".join(cells))
        if not self.columns:
            lines.append("(no file/sidecar pairs found)")
        lines.append("")
        lines.append("classifier confusion (layout -> detected: count):")
        confusion = self.confusion()
        if not confusion:
            lines.append("  (none)")
        for layout in sorted(confusion):
            row = ", ".join(
                f"{detected}: {count}" for detected, count in sorted(confusion[layout].items())
            )
            lines.append(f"  {layout:<12} {row}")
        return "\n".join(lines)


def _pct(x: float | None) -> str:
    return "-" if x is None else f"{100 * x:.1f}%"


def _p90(values) -> float:
    return float(np.percentile(values, 90))


def _aggregate(cols: list[ColumnValidation], world: str, fn) -> dict[str, float | None]:
    out: dict[str, float | None] = {}
    for method in METHODS:
        errors = [e for c in cols if (e := c.error(method, world)) is not None]
        out[method] = float(fn(errors)) if errors else None
    return out


def _estimates_json(est: MethodEstimates) -> dict:
    return {"dict": est.dict_ndv, "minmax": est.minmax_ndv, "hybrid": est.hybrid_ndv}


def _method_estimates(assessment: ColumnAssessment) -> MethodEstimates:
    non_null = assessment.profile.non_null_values
    dict_ndv = assessment.dict_result.ndv_dict if assessment.dict_result else None
    minmax_ndv = None
    if assessment.minmax_result is not None:
        # Standalone method view: the universal row-count clamp applies.
        minmax_ndv = min(assessment.minmax_result.ndv_minmax, float(max(non_null, 1)))
    hybrid = float(assessment.estimate.ndv_final) if assessment.estimate else None
    return MethodEstimates(dict_ndv, minmax_ndv, hybrid)


def _writer_size_ratio(assessment: ColumnAssessment, truth: synth.ColumnTruth) -> float | None:
    observed = 0.0
    modeled = 0.0
    for chunk, group in zip(assessment.profile.chunks, truth.per_group):
        if not chunk.dictionary_encoded or group.distinct == 0:
            continue
        observed += chunk.uncompressed_size
        modeled += storage_size(group.distinct, truth.mean_len, group.rows, group.nulls)
    if modeled <= 0:
        return None
    return observed / modeled


def validate_pair(parquet_path: Union[str, Path], truth: synth.GroundTruth) -> list[ColumnValidation]:
    """Validate every column of one file against its ground truth."""
    parquet_path = Path(parquet_path)
    out = []
    profiles = {p.column_name: p for p in read_file_profiles(parquet_path)}
    for name, column_truth in sorted(truth.columns.items()):
        profile = profiles.get(name)
        if profile is None or column_truth.ndv_true < 1:
            continue
        file_assessment = assess_profile(profile)
        model_assessment = assess_profile(synth.profile_from_ground_truth(column_truth))
        out.append(
            ColumnValidation(
                file=parquet_path.name,
                column=name,
                layout=column_truth.layout,
                ndv_true=column_truth.ndv_true,
                detected_class=file_assessment.report.layout_class.value,
                file_estimates=_method_estimates(file_assessment),
                model_estimates=_method_estimates(model_assessment),
                writer_size_ratio=_writer_size_ratio(file_assessment, column_truth),
                is_lower_bound=bool(
                    file_assessment.estimate and file_assessment.estimate.is_lower_bound
                ),
            )
        )
    return out


def validate_corpus(corpus_dir: Union[str, Path]) -> ValidationReport:
    """Validate every *.parquet with a sidecar under a directory."""
    corpus_dir = Path(corpus_dir)
    report = ValidationReport()
    for parquet_path in sorted(corpus_dir.glob("*.parquet")):
        sidecar = synth.sidecar_path(parquet_path)
        if not sidecar.exists():
            report.skipped.append(parquet_path.name)
            continue
        truth = synth.load_sidecar(sidecar)
        report.columns.extend(validate_pair(parquet_path, truth))
    return report
