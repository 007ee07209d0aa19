"""Rich Live display for table reproduction progress."""

from __future__ import annotations

import threading

from rich.console import Console, Group, RenderableType
from rich.live import Live
from rich.panel import Panel
from rich.progress import (
    BarColumn,
    Progress,
    SpinnerColumn,
    TaskID,
    TextColumn,
    TimeElapsedColumn,
)
from rich.text import Text


class RunStats:
    """Thread-safe running totals."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._counts: dict[str, int] = {}

    def increment(self, name: str, count: int = 1) -> None:
        with self._lock:
            self._counts[name] = self._counts.get(name, 0) + count

    def get(self, name: str) -> int:
        with self._lock:
            return self._counts.get(name, 0)

    def items(self) -> list[tuple[str, int]]:
        with self._lock:
            return list(self._counts.items())


class ProgressDisplay:
    """Manages the Rich Live terminal display."""

    def __init__(self, console: Console) -> None:
        self.console = console
        self._stats = RunStats()
        self._status_message = ""
        self._table = ""
        self._q = 0
        self._engine = ""
        self._workers = 1
        self._certified = 0
        self._lock = threading.Lock()
        self._live: Live | None = None

        self._rows = Progress(
            SpinnerColumn(),
            TextColumn("  Rows: {task.description}"),
            BarColumn(),
            TextColumn("{task.completed}/{task.total}"),
            TimeElapsedColumn(),
            console=console,
        )
        self._rows_task: TaskID | None = None

    @property
    def stats(self) -> RunStats:
        return self._stats

    def _build_header(self) -> Panel:
        header = Text()
        header.append(f"  Table: {self._table}", style="bold")
        header.append(f" | GF({self._q})")
        header.append(f" | Engine: {self._engine}")
        header.append(f" | Workers: {self._workers}")
        return Panel(header, title="surfacecodes - table reproduction", border_style="blue")

    def _build_stats_line(self) -> Text:
        parts = [f"{name}: {count:,}" for name, count in self._stats.items()]
        if not parts:
            return Text("")
        return Text("  " + " | ".join(parts), style="dim")

    def _build_footer(self) -> Text:
        footer = Text()
        if self._status_message:
            footer.append(f"  Current: {self._status_message}\n", style="dim")
        footer.append(f"  Exact distances: {self._certified}", style="dim")
        return footer

    def _build_layout(self) -> RenderableType:
        parts: list[RenderableType] = [self._build_header()]
        if self._rows_task is not None:
            parts.append(self._rows)
            parts.append(Text(""))
        stats_line = self._build_stats_line()
        if stats_line.plain:
            parts.append(stats_line)
        parts.append(self._build_footer())
        return Group(*parts)

    def start(self) -> None:
        self._live = Live(
            self._build_layout(),
            console=self.console,
            refresh_per_second=4,
            transient=False,
        )
        self._live.start()

    def stop(self) -> None:
        if self._live:
            self._live.stop()
            self._live = None

    def _refresh(self) -> None:
        if self._live:
            self._live.update(self._build_layout())

    def set_run_info(self, table: str, q: int, engine: str, workers: int) -> None:
        with self._lock:
            self._table, self._q, self._engine, self._workers = table, q, engine, workers
            self._refresh()

    def start_rows(self, total: int, description: str = "") -> None:
        with self._lock:
            self._rows_task = self._rows.add_task(description, total=total)
            self._refresh()

    def advance_row(self, label: str, exact: bool = False) -> None:
        with self._lock:
            if self._rows_task is not None:
                self._rows.update(self._rows_task, advance=1, description=label)
            if exact:
                self._certified += 1
            self._refresh()

    def update_status(self, message: str) -> None:
        with self._lock:
            self._status_message = message
            self._refresh()

    def increment_stat(self, stat_name: str, count: int = 1) -> None:
        self._stats.increment(stat_name, count)
        with self._lock:
            self._refresh()
