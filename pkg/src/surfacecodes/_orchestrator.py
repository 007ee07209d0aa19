"""Coordinates a table reproduction run."""

from __future__ import annotations

import logging
import signal
import sys
import time
from pathlib import Path
from typing import IO, Any

from rich.console import Console

from surfacecodes.agbuilder import (
    EvaluationCodeSpec,
    build_functional_code,
    line_dual_witness,
    resolve_chart,
    rm_dual_witness,
    section_dual_witness,
)
from surfacecodes.checkpoint import RowCheckpoint
from surfacecodes.config import ReproduceConfig, resolve_workers
from surfacecodes.engines import compute_distance
from surfacecodes.engines.base import (
    Certainty,
    DistanceResult,
    certify,
    combine,
    witness_result,
)
from surfacecodes.exceptions import GeometryError, SurfaceCodesError, WitnessError
from surfacecodes.executor import WorkerPool
from surfacecodes.gf import field_from_order
from surfacecodes.progress import ProgressDisplay
from surfacecodes.surface import Surface, SurfaceKind, build_preset, read_surface
from surfacecodes.tables import RowRecipe, get_table, load_best_known, table_q, table_rows

logger = logging.getLogger(__name__)

PRESET_FOR_KIND = {
    SurfaceKind.PROJECTIVE_PLANE: "p2",
    SurfaceKind.HYPERBOLIC_QUADRIC: "hyperbolic-quadric",
    SurfaceKind.ELLIPTIC_QUADRIC: "elliptic-quadric",
    SurfaceKind.CUBIC_WITH_LINES: "cubic-with-lines",
}


class ReproduceRunner:
    """Builds each row's code, bound and distance, with checkpointed resume."""

    def __init__(
        self,
        config: ReproduceConfig,
        console: Console,
        csv_stream: IO[str] | None = None,
    ) -> None:
        self.config = config
        self.console = console
        self.csv_stream = csv_stream
        self.q = table_q(config.table, config.q)
        self.field = field_from_order(self.q)
        self.workers = resolve_workers(config.engine.workers)
        self.pool = WorkerPool(self.workers)
        self.checkpoint = RowCheckpoint(config.output_dir, config.config_hash())
        self.progress = ProgressDisplay(console) if not config.json_only else None
        self._surfaces: dict[SurfaceKind, Surface] = {}
        self._best_known: dict[tuple[str, int, int], str] = {}
        self._ctrl_c_count = 0

    def run(self) -> dict[str, Any]:
        """Execute the whole table and return the JSON report."""
        self._install_signal_handler()
        started = time.monotonic()
        recipes = table_rows(self.config.table, self.q)
        self._check_inputs()

        if self.config.fresh:
            self.checkpoint.discard()
        self.checkpoint.open(resume=self.config.resume)
        if self.config.best_known_file is not None:
            self._best_known = load_best_known(self.config.best_known_file)

        if self.progress:
            self.progress.set_run_info(
                self.config.table, self.q, self.config.engine.engine, self.workers
            )
            self.progress.start_rows(len(recipes))
            self.progress.start()
        try:
            for recipe in recipes:
                if self.pool.should_stop:
                    break
                self._run_recipe(recipe)
        finally:
            interrupted = self.pool.should_stop
            if self.progress:
                self.progress.stop()
            self.pool.shutdown()

        report = self._finish(recipes, time.monotonic() - started)
        if interrupted:
            self.console.print("[yellow]Run interrupted. Use --resume to continue.[/]")
        else:
            self.checkpoint.discard()
        return report

    def _check_inputs(self) -> None:
        meta = get_table(self.config.table)
        if meta.needs_surface and self.config.surface_file is None:
            raise GeometryError(
                f"table {self.config.table} needs a surface file "
                "(create one with `surfacecodes find-cubic`)"
            )

    def _run_recipe(self, recipe: RowRecipe) -> None:
        key = recipe.key
        if self.checkpoint.has_row(key):
            if self.progress:
                self.progress.advance_row(key)
            return
        try:
            row = self.run_row(recipe)
        except SurfaceCodesError as e:
            self.checkpoint.record_failure(key, str(e))
            logger.error("Row %s failed: %s", key, e)
            exact = False
        else:
            if self.pool.should_stop:
                logger.info("Row %s interrupted; not checkpointed", key)
                return
            self.checkpoint.record_row(key, row)
            exact = (row.get("distance") or {}).get("certainty") == Certainty.EXACT.value
        if self.progress:
            self.progress.advance_row(key, exact=exact)

    def surface_for(self, kind: SurfaceKind) -> Surface:
        """Each kind's surface is built (or read) once per run."""
        if kind not in self._surfaces:
            if kind is SurfaceKind.CUBIC_NO_LINES:
                if self.config.surface_file is None:
                    raise GeometryError("cubic rows need a surface file")
                surface = read_surface(self.config.surface_file)
                if surface.field.q != self.q:
                    raise GeometryError(
                        f"surface file is over {surface.field!r}, table needs GF({self.q})"
                    )
                if surface.kind is not kind:
                    raise GeometryError(
                        f"surface file holds a {surface.kind.value} surface, need {kind.value}"
                    )
            else:
                surface = build_preset(PRESET_FOR_KIND[kind], self.field)
            surface.validate()
            self._surfaces[kind] = surface
        return self._surfaces[kind]

    def run_row(self, recipe: RowRecipe) -> dict[str, Any]:
        if self.progress:
            self.progress.update_status(f"{recipe.key}: building code")
        surface = self.surface_for(recipe.kind)
        chart_plane = self.config.chart_plane if surface.r == 3 else None
        chart = resolve_chart(surface, chart_plane=chart_plane)
        spec = EvaluationCodeSpec.create(surface, recipe.m, chart)
        code = build_functional_code(spec)
        dual = code.dual()
        report = recipe.evaluate(self.q)

        distance: DistanceResult | None = None
        if not self.config.skip_distance:
            distance = self._distance(recipe, spec, dual, report.bound, report.verified)

        return {
            "key": recipe.key,
            "q": self.q,
            "kind": recipe.kind.value,
            "m": recipe.m,
            "n": code.n,
            "k": code.k,
            "dual_dimension": dual.k,
            "chart": chart.describe(),
            "theorem": report.theorem,
            "bound_value": report.bound,
            "bound_verified": report.verified,
            "expected_bound": recipe.expected,
            "bound": report.to_dict(),
            "distance": distance.to_dict() if distance else None,
            "best_known": self._best_known.get((recipe.kind.value, self.q, recipe.m)),
        }

    def _distance(
        self,
        recipe: RowRecipe,
        spec: EvaluationCodeSpec,
        dual,
        bound: int,
        verified: bool,
    ) -> DistanceResult:
        lower = bound if verified else None
        witness = self._witness(recipe, spec, dual)
        if witness is not None:
            certified = certify(lower, witness)
            if certified.certainty is Certainty.EXACT:
                return certified
        if self.progress:
            self.progress.update_status(f"{recipe.key}: {self.config.engine.engine} search")
        result = compute_distance(
            dual, self.config.engine, pool=self.pool, progress=self.progress, target=bound
        )
        if witness is not None:
            result = combine(result, witness)
        return certify(lower, result)

    def _witness(self, recipe: RowRecipe, spec: EvaluationCodeSpec, dual):
        """Constructed low-weight dual word, for the kinds that have one."""
        try:
            if recipe.kind is SurfaceKind.PROJECTIVE_PLANE:
                word = rm_dual_witness(self.field, recipe.m)
                return witness_result(dual, word, "rm-witness")
            if recipe.kind in (SurfaceKind.HYPERBOLIC_QUADRIC, SurfaceKind.CUBIC_WITH_LINES):
                return witness_result(dual, line_dual_witness(spec), "line-witness")
            if recipe.kind in (SurfaceKind.ELLIPTIC_QUADRIC, SurfaceKind.CUBIC_NO_LINES):
                return witness_result(dual, section_dual_witness(spec), "section-witness")
        except WitnessError as e:
            logger.debug("No constructed witness for %s: %s", recipe.key, e)
        except SurfaceCodesError as e:
            logger.warning("No constructed witness for %s: %s", recipe.key, e)
        return None

    def _finish(self, recipes: list[RowRecipe], duration: float) -> dict[str, Any]:
        from surfacecodes.export import write_table_csv
        from surfacecodes.report import build_report_data, generate_report

        stored = self.checkpoint.rows()
        rows = [stored[r.key] for r in recipes if r.key in stored]
        surfaces = {
            kind.value: {
                "points": surface.num_points,
                "equation": str(surface.equation) if surface.equation is not None else None,
            }
            for kind, surface in self._surfaces.items()
        }
        errors = self.checkpoint.failures
        report = build_report_data(rows, self.config, self.q, duration, errors, surfaces)
        generate_report(report, self.config, self.console)

        csv_path = Path(self.config.output_dir) / f"{self.config.table}.csv"
        with open(csv_path, "w", newline="") as f:
            write_table_csv(report, f)
        if self.csv_stream is not None:
            write_table_csv(report, self.csv_stream)
        return report

    def _install_signal_handler(self) -> None:
        """ctrl+c once stops after the current block; twice quits."""

        def handler(signum, frame):
            self._ctrl_c_count += 1
            if self._ctrl_c_count == 1:
                self.console.print(
                    "\n[yellow]Graceful shutdown requested. "
                    "Finishing the current search block... (ctrl+c again to force quit)[/]"
                )
                self.pool.request_shutdown()
            else:
                self.console.print("\n[red]Force quit.[/]")
                if self.progress:
                    self.progress.stop()
                sys.exit(1)

        signal.signal(signal.SIGINT, handler)
