"""CSV export of table reports."""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path
from typing import IO, Any

from rich.console import Console

from surfacecodes.engines.base import DistanceResult
from surfacecodes.exceptions import ReportError

logger = logging.getLogger(__name__)

FLAT_COLUMNS = [
    "q", "kind", "m", "length", "dimension", "dual_dimension",
    "bound", "theorem", "distance", "best_known",
]
PIVOT_FIELDS = ["bound", "theorem", "distance", "best_known"]


def bound_cell(row: dict[str, Any]) -> str:
    value = row.get("bound_value")
    return "" if value is None else f">={value}"


def distance_cell(row: dict[str, Any]) -> str:
    data = row.get("distance")
    if not data:
        return ""
    return DistanceResult.from_dict(data).marker()


def _cells(row: dict[str, Any]) -> dict[str, Any]:
    return {
        "bound": bound_cell(row),
        "theorem": row.get("theorem", ""),
        "distance": distance_cell(row),
        "best_known": row.get("best_known") or "",
    }


def _is_quadric_table(report: dict[str, Any]) -> bool:
    return report.get("metadata", {}).get("table", "").endswith("-quadrics")


def table_csv_rows(report: dict[str, Any]) -> tuple[list[str], list[dict[str, Any]]]:
    """Column names and rows; quadric tables get one line per m, kinds side by side."""
    rows = report.get("rows", [])
    if not _is_quadric_table(report):
        out = []
        for row in rows:
            out.append({
                "q": row["q"],
                "kind": row["kind"],
                "m": row["m"],
                "length": row["n"],
                "dimension": row["k"],
                "dual_dimension": row["dual_dimension"],
                **_cells(row),
            })
        return FLAT_COLUMNS, out

    kinds: list[str] = []
    by_m: dict[int, dict[str, Any]] = {}
    for row in rows:
        if row["kind"] not in kinds:
            kinds.append(row["kind"])
        line = by_m.setdefault(row["m"], {
            "q": row["q"],
            "m": row["m"],
            "length": row["n"],
            "dual_dimension": row["dual_dimension"],
        })
        if line["length"] != row["n"] or line["dual_dimension"] != row["dual_dimension"]:
            raise ReportError(f"m={row['m']}: quadric rows disagree on length or dimension")
        prefix = row["kind"].split("-")[0]
        for name, value in _cells(row).items():
            line[f"{prefix}_{name}"] = value
    fieldnames = ["q", "m", "length", "dual_dimension"]
    for kind in kinds:
        prefix = kind.split("-")[0]
        fieldnames.extend(f"{prefix}_{name}" for name in PIVOT_FIELDS)
    return fieldnames, [by_m[m] for m in sorted(by_m)]


def write_table_csv(report: dict[str, Any], stream: IO[str]) -> None:
    """Write the table CSV; no timing data, so equal runs give equal bytes."""
    fieldnames, rows = table_csv_rows(report)
    writer = csv.DictWriter(stream, fieldnames=fieldnames, lineterminator="\n", restval="")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def export_csv(report_path: Path, output_dir: Path, console: Console) -> Path:
    """Rebuild `<table>.csv` from a saved JSON report."""
    try:
        with open(report_path) as f:
            report = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ReportError(f"cannot read report {report_path}: {e}") from e

    table = report.get("metadata", {}).get("table")
    if not table or "rows" not in report:
        raise ReportError(f"{report_path} is not a table report")
    output_dir.mkdir(parents=True, exist_ok=True)
    csv_path = output_dir / f"{table}.csv"
    with open(csv_path, "w", newline="") as f:
        write_table_csv(report, f)
    console.print(f"  [green]Wrote[/] {csv_path}")
    return csv_path
