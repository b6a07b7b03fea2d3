"""Command-line surface: estimate, generate, validate."""

from __future__ import annotations

import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from . import synth
from .combine import SchemaConstraints
from .errors import NdvScoutError
from .pipeline import assess_file
from .report import estimate_report_json, estimate_report_table
from .validate import validate_corpus

LOG_ENV_VAR = "NDV_SCOUT_LOG"

logger = logging.getLogger("ndv_scout")


def _configure_logging() -> None:
    level_name = os.environ.get(LOG_ENV_VAR, "WARNING").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


@click.group()
def main() -> None:
    """Estimate per-column distinct value counts from Parquet footers."""
    _configure_logging()


def _positive_bytes(ctx, param, value):
    if value is not None and value <= 0:
        raise click.BadParameter("must be a positive number of bytes")
    return value


def _load_constraints(path: str | None) -> SchemaConstraints | None:
    if path is None:
        return None
    try:
        with open(path, "r", encoding="utf-8") as fh:
            mapping = json.load(fh)
        if not isinstance(mapping, dict):
            raise ValueError("constraints file must be a flat JSON object")
        return SchemaConstraints({str(k): int(v) for k, v in mapping.items()})
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise click.ClickException(f"cannot load constraints {path!r}: {exc}") from exc


@main.command()
@click.argument("paths", nargs=-1, required=True, type=click.Path())
@click.option(
    "--columns",
    default=None,
    help="Comma-separated column names to estimate (default: all).",
)
@click.option(
    "--batch-size",
    type=float,
    default=None,
    callback=_positive_bytes,
    help="Batch size in bytes; enables batch dictionary memory prediction.",
)
@click.option(
    "--constraints",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="JSON file mapping column name to a known NDV upper bound.",
)
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["json", "table"]),
    default="table",
    show_default=True,
)
@click.option("--explain", is_flag=True, help="Include per-method diagnostics (JSON only).")
@click.option("--jobs", type=int, default=4, show_default=True, help="Concurrent files.")
def estimate(paths, columns, batch_size, constraints, output_format, explain, jobs):
    """Estimate NDV for each column of each Parquet file, footer-only.

    Exits 0 on success, 1 if any file failed to parse, 2 on usage errors.
    """
    column_filter = (
        {name.strip() for name in columns.split(",") if name.strip()} if columns else None
    )
    schema_constraints = _load_constraints(constraints)

    def work(path: str):
        return assess_file(
            path,
            columns=column_filter,
            constraints=schema_constraints,
            batch_bytes=batch_size,
        )

    results = []
    failed = False
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        futures = {path: pool.submit(work, path) for path in paths}
        for path, future in futures.items():
            try:
                results.append((path, future.result()))
            except (NdvScoutError, OSError) as exc:
                failed = True
                click.echo(f"error: {path}: {exc}", err=True)

    if output_format == "json":
        click.echo(json.dumps(estimate_report_json(results, explain=explain), indent=2))
    else:
        click.echo(estimate_report_table(results))
    sys.exit(1 if failed else 0)


def _spec_error(location: str, message: str) -> click.ClickException:
    return click.ClickException(f"spec error at {location}: {message}")


def _parse_generation_spec(doc: dict) -> list[dict]:
    if not isinstance(doc, dict) or "files" not in doc:
        raise _spec_error("$", 'expected an object with a "files" list')
    parsed = []
    for i, entry in enumerate(doc["files"]):
        loc = f"files[{i}]"
        for required in ("name", "rows", "row_group_rows", "columns"):
            if required not in entry:
                raise _spec_error(loc, f"missing field {required!r}")
        columns = []
        for j, col in enumerate(entry["columns"]):
            cloc = f"{loc}.columns[{j}]"
            for required in ("name", "value_type", "ndv"):
                if required not in col:
                    raise _spec_error(cloc, f"missing field {required!r}")
            try:
                layout = synth.Layout(col.get("layout", "Uniform"))
            except ValueError as exc:
                raise _spec_error(f"{cloc}.layout", str(exc))
            string_len = col.get("string_len", [2, 16])
            if isinstance(string_len, list):
                string_len = tuple(string_len)
            try:
                columns.append(
                    synth.ColumnSpec(
                        name=col["name"],
                        value_type=col["value_type"],
                        ndv=int(col["ndv"]),
                        rows=int(entry["rows"]),
                        row_group_rows=int(entry["row_group_rows"]),
                        layout=layout,
                        null_fraction=float(col.get("null_fraction", 0.0)),
                        seed=int(col.get("seed", 0)),
                        zipf_s=float(col.get("zipf_s", 1.2)),
                        string_len=string_len,
                        dictionary=bool(col.get("dictionary", True)),
                    )
                )
            except (ValueError, TypeError) as exc:
                raise _spec_error(cloc, str(exc))
        names = [c.name for c in columns]
        if len(set(names)) != len(names):
            raise _spec_error(loc, f"duplicate column names: {names}")
        parsed.append(
            {
                "name": entry["name"],
                "columns": columns,
                "compression": entry.get("compression", "none"),
                "dictionary_page_limit_bytes": entry.get("dictionary_page_limit_bytes"),
            }
        )
    return parsed


@main.command()
@click.argument("spec_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("out_dir", type=click.Path(file_okay=False))
def generate(spec_file, out_dir):
    """Generate a synthetic Parquet corpus with ground-truth sidecars."""
    try:
        with open(spec_file, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise click.ClickException(f"spec is not valid JSON: {exc}") from exc
    entries = _parse_generation_spec(doc)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for entry in entries:
        path = out / entry["name"]
        try:
            truth = synth.generate_file(
                entry["columns"],
                path,
                compression=entry["compression"],
                dictionary_page_limit=entry["dictionary_page_limit_bytes"],
            )
        except (NdvScoutError, ValueError) as exc:
            raise click.ClickException(f"{entry['name']}: {exc}") from exc
        click.echo(f"wrote {path} + {synth.sidecar_path(path).name} "
                   f"({len(truth.columns)} columns)")


@main.command()
@click.argument("corpus_dir", type=click.Path(exists=True, file_okay=False))
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["json", "table"]),
    default="table",
    show_default=True,
)
def validate(corpus_dir, output_format):
    """Score estimates against sidecar ground truth across a corpus."""
    report = validate_corpus(corpus_dir)
    for name in report.skipped:
        click.echo(f"warning: {name}: missing sidecar, skipped", err=True)
    if output_format == "json":
        click.echo(json.dumps(report.to_json_dict(), indent=2))
    else:
        click.echo(report.to_table())


if __name__ == "__main__":
    main()
