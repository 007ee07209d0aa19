"""JSON and console report generation for table runs."""

from __future__ import annotations

import json
import logging
from datetime import UTC, datetime
from pathlib import Path
from typing import Any

from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from surfacecodes import __version__
from surfacecodes.config import ReproduceConfig
from surfacecodes.exceptions import ReportError
from surfacecodes.export import bound_cell, distance_cell

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

CERTAINTY_STYLES = {
    "exact": "green",
    "interval": "yellow",
    "lower-bound": "yellow",
    "upper-bound": "red",
}


def build_report_data(
    rows: list[dict[str, Any]],
    config: ReproduceConfig,
    q: int,
    duration: float,
    errors: list[dict],
    surface: dict[str, Any] | None = None,
) -> dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "metadata": {
            "tool_version": __version__,
            "generated_at": datetime.now(UTC).isoformat(),
            "table": config.table,
            "q": q,
            "duration_seconds": round(duration, 1),
            "row_count": len(rows),
            "error_count": len(errors),
            "config": {
                "engine": config.engine.model_dump(),
                "skip_distance": config.skip_distance,
                "surface_file": str(config.surface_file) if config.surface_file else None,
                "chart_plane": list(config.chart_plane) if config.chart_plane else None,
                "best_known_file": (
                    str(config.best_known_file) if config.best_known_file else None
                ),
                "config_hash": config.config_hash(),
            },
            "surface": surface,
        },
        "rows": rows,
        "errors": errors,
    }


def generate_report(report_data: dict[str, Any], config: ReproduceConfig, console: Console) -> Path:
    """Write `<table>.json` and render the console summary unless json_only."""
    output_dir = config.output_dir
    output_dir.mkdir(parents=True, exist_ok=True)
    json_path = output_dir / f"{config.table}.json"
    with open(json_path, "w") as f:
        json.dump(report_data, f, indent=2, default=str)

    if not config.json_only:
        render_summary(report_data, console)
        console.print(f"\n[bold green]Report saved to:[/] {json_path}")
    return json_path


def render_report_from_file(file_path: Path, console: Console) -> None:
    """Re-render a previously saved JSON report."""
    try:
        with open(file_path) as f:
            report_data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ReportError(f"cannot read report {file_path}: {e}") from e
    if report_data.get("schema") != SCHEMA_VERSION or "rows" not in report_data:
        raise ReportError(f"{file_path} is not a schema {SCHEMA_VERSION} table report")
    render_summary(report_data, console)


def render_summary(report_data: dict[str, Any], console: Console) -> None:
    metadata = report_data.get("metadata", {})
    rows = report_data.get("rows", [])

    exact = sum(1 for r in rows if (r.get("distance") or {}).get("certainty") == "exact")
    mismatched = [r for r in rows if r.get("expected_bound") not in (None, r.get("bound_value"))]
    flagged = [r for r in rows if not r.get("bound_verified", True)]

    header = Text()
    header.append(f"Table {metadata.get('table', '?')}", style="bold")
    header.append(f" over GF({metadata.get('q', '?')})\n")
    header.append(f"{len(rows)} rows, {exact} exact distances", style="dim")
    style = "red" if mismatched else "green"
    console.print()
    console.print(Panel(header, border_style=style))

    table = Table(title="Dual codes", show_header=True, show_lines=False)
    table.add_column("Kind", style="cyan")
    table.add_column("m", justify="right")
    table.add_column("Length", justify="right")
    table.add_column("Dimension", justify="right")
    table.add_column("Bound", justify="right")
    table.add_column("Theorem")
    table.add_column("Distance", justify="right")
    table.add_column("Best known", justify="right")

    for row in rows:
        certainty = (row.get("distance") or {}).get("certainty")
        bound = bound_cell(row)
        if not row.get("bound_verified", True):
            bound += " *"
        table.add_row(
            row["kind"],
            str(row["m"]),
            str(row["n"]),
            str(row["dual_dimension"]),
            bound,
            row.get("theorem", ""),
            Text(distance_cell(row) or "-", style=CERTAINTY_STYLES.get(certainty, "dim")),
            row.get("best_known") or "",
        )
    console.print(table)

    if flagged:
        console.print(
            "[yellow]* class set excluded without a Theta argument: "
            + ", ".join(
                f"{r['kind']} m={r['m']} ({', '.join(r['bound']['unjustified_exclusions'])})"
                for r in flagged
            )
            + "[/]"
        )
    for row in mismatched:
        console.print(
            f"[red]{row['kind']} m={row['m']}: bound {row['bound_value']}, "
            f"expected {row['expected_bound']}[/]"
        )

    errors = report_data.get("errors", [])
    if errors:
        console.print()
        err_table = Table(title="Errors", show_header=True)
        err_table.add_column("Row", style="cyan")
        err_table.add_column("Error")
        for err in errors:
            err_table.add_row(err.get("key", ""), err.get("error", ""))
        console.print(err_table)

    stats = Table(title="Run Statistics", show_header=False)
    stats.add_column("Metric", style="bold")
    stats.add_column("Value")
    stats.add_row("Duration", f"{metadata.get('duration_seconds', 0):.1f}s")
    engine = metadata.get("config", {}).get("engine", {})
    stats.add_row("Engine", str(engine.get("engine", "")))
    stats.add_row("Tool Version", metadata.get("tool_version", ""))
    console.print()
    console.print(stats)
