"""Click CLI application for surfacecodes."""

from __future__ import annotations

import functools
import json
import logging
import sys
from pathlib import Path
from typing import Any

import click
from pydantic import ValidationError
from rich.console import Console

from surfacecodes import __version__
from surfacecodes.config import EngineConfig, ReproduceConfig, resolve_workers
from surfacecodes.engines import ENGINE_REGISTRY
from surfacecodes.exceptions import SurfaceCodesError, SurfaceValidationError
from surfacecodes.surface import PRESETS
from surfacecodes.tables import TABLE_REGISTRY

console = Console()
err_console = Console(stderr=True)

SCHEMA_VERSION = 1


def _emit(data: dict[str, Any]) -> None:
    click.echo(json.dumps(data, indent=2, sort_keys=False))


def handle_errors(func):
    """Report library errors as `Error: ...` and exit 1."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except SurfaceCodesError as e:
            err_console.print(f"[bold red]Error:[/] {e}")
            sys.exit(1)
        except ValidationError as e:
            raise click.UsageError(str(e)) from e

    return wrapper


def _parse_plane(value: str | None) -> tuple[int, ...] | None:
    if value is None:
        return None
    try:
        return tuple(int(c) for c in value.split(","))
    except ValueError as e:
        raise click.BadParameter(f"expected comma separated integers, got {value!r}") from e


def _load_surface(preset: str | None, q: int | None, surface_file: str | None, seed: int = 0):
    from surfacecodes.gf import field_from_order
    from surfacecodes.surface import build_preset, read_surface

    if surface_file is not None:
        if preset is not None:
            raise click.UsageError("give either --preset or --surface, not both")
        return read_surface(Path(surface_file))
    if preset is None or q is None:
        raise click.UsageError("give --surface FILE, or --preset with --q")
    return build_preset(preset, field_from_order(q), seed=seed)


@click.group()
@click.version_option(version=__version__, prog_name="surfacecodes")
@click.option("--verbose", "-v", is_flag=True, help="Enable debug logging.")
@click.pass_context
def cli(ctx: click.Context, verbose: bool) -> None:
    """surfacecodes - functional codes on surfaces over finite fields."""
    ctx.ensure_object(dict)
    ctx.obj["verbose"] = verbose
    if verbose:
        logging.basicConfig(level=logging.DEBUG, format="%(name)s: %(message)s", force=True)
    else:
        logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s", force=True)


@cli.command()
@click.option("--preset", type=click.Choice(list(PRESETS)), help="Surface preset.")
@click.option("--q", "q", type=int, help="Field order for a preset.")
@click.option("--surface", "surface_file", type=click.Path(exists=True), help="Surface file.")
@click.option("--m", "m", type=int, required=True, help="Degree of the evaluated forms.")
@click.option("--chart-point", type=int, default=None, help="Tangent plane at this point index.")
@click.option("--chart-plane", default=None, help="Chart plane coefficients, e.g. 1,0,0,0.")
@click.option("--seed", default=0, type=int, show_default=True, help="Seed for searched presets.")
@click.option("--out", type=click.Path(), default=None, help="Write the generator matrix here.")
@click.option("--dual-out", type=click.Path(), default=None, help="Write the dual generator here.")
@handle_errors
def build(
    preset: str | None,
    q: int | None,
    surface_file: str | None,
    m: int,
    chart_point: int | None,
    chart_plane: str | None,
    seed: int,
    out: str | None,
    dual_out: str | None,
) -> None:
    """Build the functional code C_L(S, Delta, mH) and print a JSON summary."""
    from surfacecodes.agbuilder import (
        EvaluationCodeSpec,
        build_functional_code,
        expected_dimension,
        resolve_chart,
    )
    from surfacecodes.linalg import dumps_matrix

    surface = _load_surface(preset, q, surface_file, seed)
    surface.validate()
    chart = resolve_chart(surface, chart_point=chart_point, chart_plane=_parse_plane(chart_plane))
    spec = EvaluationCodeSpec.create(surface, m, chart)
    code = build_functional_code(spec)
    dual = code.dual()
    if out:
        Path(out).write_text(dumps_matrix(code.generator))
    if dual_out:
        Path(dual_out).write_text(dumps_matrix(dual.generator))
    _emit({
        "schema": SCHEMA_VERSION,
        "kind": surface.kind.value,
        "q": surface.field.q,
        "m": m,
        "n": code.n,
        "k": code.k,
        "dual_dimension": dual.k,
        "expected_dimension": expected_dimension(surface.kind, surface.field.q, m),
        "chart": chart.describe(),
    })


@cli.command()
@click.argument("code_file", type=click.Path(exists=True))
@click.option("--dual", is_flag=True, help="Measure the dual of the code in the file.")
@click.option(
    "--engine", type=click.Choice(list(ENGINE_REGISTRY)), default="isd", show_default=True
)
@click.option("--target", type=int, default=None, help="Stop once a word this light is found.")
@click.option("--budget", type=int, default=None, help="Engine work budget.")
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--workers", "-w", default=1, type=int, show_default=True, help="Worker threads.")
@click.option("--probe", default=0, type=int, show_default=True, help="Random probes first.")
@handle_errors
def distance(
    code_file: str,
    dual: bool,
    engine: str,
    target: int | None,
    budget: int | None,
    seed: int,
    workers: int,
    probe: int,
) -> None:
    """Compute the minimum distance of a code given by its generator matrix."""
    from surfacecodes.code import LinearCode
    from surfacecodes.engines import compute_distance
    from surfacecodes.executor import WorkerPool
    from surfacecodes.linalg import loads_matrix

    config = EngineConfig(
        engine=engine, budget=budget, seed=seed, workers=workers, target=target, probe=probe
    )
    code = LinearCode.from_generator(loads_matrix(Path(code_file).read_text()))
    if dual:
        code = code.dual()
    pool = WorkerPool(resolve_workers(config.workers))
    try:
        result = compute_distance(code, config, pool=pool)
    finally:
        pool.shutdown()
    data = result.to_dict()
    data.update({"n": code.n, "k": code.k})
    _emit(data)


@cli.command()
@click.option("--preset", type=click.Choice(list(PRESETS)), default=None, help="Surface kind.")
@click.option("--surface", "surface_file", type=click.Path(exists=True), default=None,
              help="Surface file; a cubic with lines takes its lines from it.")
@click.option("--q", "q", type=int, default=None, help="Field order.")
@click.option("--m", "m", type=int, required=True)
@click.option("--improved", is_flag=True, help="Use the point-count improvement.")
@click.option("--classes", default=None, help="Class set D, e.g. H..5H or E,F,H,2H.")
@click.option("--exclude", default=None, help="Override E (kept classes); flagged in output.")
@handle_errors
def bounds(
    preset: str | None,
    surface_file: str | None,
    q: int | None,
    m: int,
    improved: bool,
    classes: str | None,
    exclude: str | None,
) -> None:
    """Lower bound for the dual minimum distance from intersection numbers."""
    from surfacecodes.picard import bound_basic, bound_improved, lattice_for
    from surfacecodes.surface import read_surface

    if surface_file is not None:
        surface = read_surface(Path(surface_file))
        kind, q = surface.kind, surface.field.q
        lattice = lattice_for(kind, q, surface)
    else:
        if preset is None or q is None:
            raise click.UsageError("give --surface FILE, or --preset with --q")
        kind = PRESETS[preset].kind
        lattice = lattice_for(kind, q)
    if exclude is not None and not improved:
        raise click.UsageError("--exclude only applies with --improved")
    if improved:
        report = bound_improved(kind, q, m, classes=classes, e_override=exclude, lattice=lattice)
    else:
        report = bound_basic(kind, q, m, classes=classes, lattice=lattice)
    _emit(report.to_dict())


@cli.command()
@click.argument("table", type=click.Choice(list(TABLE_REGISTRY)))
@click.option("--q", "q", type=int, default=None, help="Field order (rm table only).")
@click.option(
    "--engine", type=click.Choice(list(ENGINE_REGISTRY)), default="isd", show_default=True
)
@click.option("--budget", type=int, default=None, help="Engine work budget per row.")
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--workers", "-w", default=1, type=int, show_default=True)
@click.option("--probe", default=0, type=int, show_default=True)
@click.option("--surface", "surface_file", type=click.Path(exists=True), default=None,
              help="Surface file for the cubic tables.")
@click.option("--chart-plane", default=None, help="Chart plane for surfaces in P^3.")
@click.option("--best-known", type=click.Path(exists=True), default=None,
              help="Reference file of kind,q,m,value lines.")
@click.option(
    "--output", "-o", default="./surfacecodes-output", type=click.Path(),
    help="Output directory.", show_default=True,
)
@click.option("--bounds-only", is_flag=True, help="Skip the distance searches.")
@click.option("--resume", is_flag=True, help="Resume an interrupted run.")
@click.option("--fresh", is_flag=True, help="Discard the checkpoint, start fresh.")
@click.option("--json-only", is_flag=True, help="No Rich display.")
@click.pass_context
@handle_errors
def reproduce(
    ctx: click.Context,
    table: str,
    q: int | None,
    engine: str,
    budget: int | None,
    seed: int,
    workers: int,
    probe: int,
    surface_file: str | None,
    chart_plane: str | None,
    best_known: str | None,
    output: str,
    bounds_only: bool,
    resume: bool,
    fresh: bool,
    json_only: bool,
) -> None:
    """Rebuild a parameter table and print it as CSV."""
    from surfacecodes._orchestrator import ReproduceRunner

    if resume and fresh:
        raise click.UsageError("--resume and --fresh are mutually exclusive")
    plane = _parse_plane(chart_plane)
    config = ReproduceConfig(
        table=table,
        q=q,
        engine=EngineConfig(
            engine=engine, budget=budget, seed=seed, workers=workers, probe=probe
        ),
        surface_file=Path(surface_file) if surface_file else None,
        chart_plane=plane,
        best_known_file=Path(best_known) if best_known else None,
        output_dir=Path(output),
        skip_distance=bounds_only,
        resume=resume,
        fresh=fresh,
        json_only=json_only,
        verbose=ctx.obj.get("verbose", False),
    )
    runner = ReproduceRunner(config, err_console, csv_stream=click.get_text_stream("stdout"))
    runner.run()


@cli.command("find-cubic")
@click.option("--q", "q", type=int, required=True, help="Field order, at least 4.")
@click.option("--budget", default=20_000, type=int, show_default=True, help="Attempts.")
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--no-empty-plane", is_flag=True, help="Do not require a point-free plane.")
@click.option("--out", type=click.Path(), default=None, help="Surface file (default: stdout).")
@handle_errors
def find_cubic(q: int, budget: int, seed: int, no_empty_plane: bool, out: str | None) -> None:
    """Search for a smooth cubic surface without rational lines."""
    from surfacecodes.gf import field_from_order
    from surfacecodes.surface import dumps_surface, find_cubic_no_lines

    result = find_cubic_no_lines(
        field_from_order(q), budget=budget, seed=seed, require_empty_section=not no_empty_plane
    )
    text = dumps_surface(result.surface)
    if out:
        Path(out).write_text(text)
        err_console.print(f"[bold green]Surface saved to:[/] {out}")
    else:
        click.echo(text, nl=False)
    err_console.print(
        f"[dim]Found after {result.attempts} attempts; rejections: {result.stats}[/]"
    )


@cli.command("validate-surface")
@click.argument("surface_file", type=click.Path(exists=True), required=False)
@click.option("--preset", type=click.Choice(list(PRESETS)), default=None)
@click.option("--q", "q", type=int, default=None)
@click.option("--ext-degree", default=2, type=int, show_default=True,
              help="Largest extension degree searched for singular points.")
@handle_errors
def validate_surface(
    surface_file: str | None, preset: str | None, q: int | None, ext_degree: int
) -> None:
    """Point and line counts, a partial smoothness check and the kind checks."""
    from surfacecodes.surface import smoothness_check

    surface = _load_surface(preset, q, surface_file)
    data: dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "kind": surface.kind.value,
        "q": surface.field.q,
        "points": surface.num_points,
        "lines": len(surface.line_ids) if surface.r == 3 else None,
        "equation": str(surface.equation) if surface.equation is not None else None,
    }
    if surface.r == 3:
        data["smoothness"] = smoothness_check(surface, ext_degree).to_dict()
    failure = None
    try:
        surface.validate()
    except SurfaceValidationError as e:
        failure = str(e)
    if data.get("smoothness") and not data["smoothness"]["passed"]:
        failure = failure or f"singular point {data['smoothness']['witness']}"
    data["kind_check"] = "passed" if failure is None else failure
    _emit(data)
    if failure is not None:
        err_console.print(f"[bold red]Error:[/] {failure}")
        sys.exit(1)


@cli.command("list-presets")
def list_presets() -> None:
    """Show surface presets, distance engines and reproducible tables."""
    from rich.table import Table

    presets = Table(title="Surface Presets", show_header=True)
    presets.add_column("Name", style="cyan")
    presets.add_column("Kind", style="green")
    presets.add_column("Description")
    for name, meta in PRESETS.items():
        presets.add_row(name, meta.kind.value, meta.description)
    console.print(presets)

    engines = Table(title="Distance Engines", show_header=True)
    engines.add_column("Name", style="cyan")
    engines.add_column("Result", style="green")
    engines.add_column("Description")
    for name, meta in ENGINE_REGISTRY.items():
        engines.add_row(name, "exact" if meta.exact else "upper bound", meta.description)
    console.print(engines)

    tables = Table(title="Tables", show_header=True)
    tables.add_column("Name", style="cyan")
    tables.add_column("q", justify="right")
    tables.add_column("Description")
    for name, meta in TABLE_REGISTRY.items():
        q = f"{meta.default_q}" + (" (selectable)" if meta.q_selectable else "")
        tables.add_row(name, q, meta.description)
    console.print(tables)


@cli.command("report")
@click.argument("file", type=click.Path(exists=True))
@handle_errors
def report(file: str) -> None:
    """Re-render a previously generated JSON report."""
    from surfacecodes.report import render_report_from_file

    render_report_from_file(Path(file), console)


@cli.command("export")
@click.argument("file", type=click.Path(exists=True))
@click.option(
    "--output", "-o", default=None, type=click.Path(),
    help="Output directory for the CSV. Defaults to the report's directory.",
)
@handle_errors
def export(file: str, output: str | None) -> None:
    """Export a JSON report to CSV."""
    from surfacecodes.export import export_csv

    report_path = Path(file)
    output_dir = Path(output) if output else report_path.parent
    err_console.print(f"[bold]Exporting[/] {report_path.name} to CSV...")
    export_csv(report_path, output_dir, err_console)
