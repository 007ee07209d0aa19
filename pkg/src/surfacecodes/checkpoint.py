"""Resume file for table runs.

A run stores every finished row, keyed `kind:m=..`, in
`<output>/.surfacecodes-checkpoint.json`. A resumed run skips those rows and
merges them back into the report. The file is bound to the config hash: a
run with different search settings must start over with `--fresh`.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import uuid
from datetime import UTC, datetime
from pathlib import Path
from typing import Any

from surfacecodes.exceptions import CheckpointError, ConfigMismatchError

logger = logging.getLogger(__name__)

CHECKPOINT_FILENAME = ".surfacecodes-checkpoint.json"
CHECKPOINT_SCHEMA = 1


def _now() -> str:
    return datetime.now(UTC).isoformat()


class RowCheckpoint:
    """Finished rows and row failures of one table run.

    Search threads report rows concurrently; every update rewrites the whole
    file through a temporary sibling so a killed run leaves the last full state.
    """

    def __init__(self, output_dir: Path, config_hash: str) -> None:
        self._output_dir = output_dir
        self._config_hash = config_hash
        self._lock = threading.Lock()
        self._path = output_dir / CHECKPOINT_FILENAME
        self._state: dict[str, Any] = {}

    @property
    def path(self) -> Path:
        return self._path

    def open(self, resume: bool = False) -> None:
        """Pick up the rows of an earlier run with the same config, or start empty."""
        self._output_dir.mkdir(parents=True, exist_ok=True)
        if resume and self._path.exists():
            self._state = self._read()
            if self._state.get("config_hash") != self._config_hash:
                raise ConfigMismatchError(
                    "The stored rows were computed with different settings. "
                    "Use --fresh to discard them."
                )
            logger.info(
                "Resuming run %s with %d finished rows", self.run_id, self.finished_count
            )
            return
        self._state = {
            "schema": CHECKPOINT_SCHEMA,
            "run_id": str(uuid.uuid4()),
            "started_at": _now(),
            "config_hash": self._config_hash,
            "rows": {},
            "failures": [],
        }
        self._write()

    def _read(self) -> dict[str, Any]:
        try:
            return json.loads(self._path.read_text())
        except (json.JSONDecodeError, OSError) as e:
            raise CheckpointError(f"cannot read stored rows from {self._path}: {e}") from e

    def _write(self) -> None:
        staging = self._path.with_suffix(".tmp")
        try:
            staging.write_text(json.dumps(self._state, indent=2, default=str))
            os.replace(staging, self._path)
        except OSError as e:
            raise CheckpointError(f"cannot store rows in {self._path}: {e}") from e

    def record_row(self, key: str, row: dict[str, Any]) -> None:
        with self._lock:
            self._state["rows"][key] = {"finished_at": _now(), "row": row}
            self._write()

    def record_failure(self, key: str, error: str) -> None:
        """A failed row is logged but stays pending, so a resumed run retries it."""
        with self._lock:
            self._state["failures"].append({"key": key, "error": error, "at": _now()})
            self._write()

    def has_row(self, key: str) -> bool:
        with self._lock:
            return key in self._state.get("rows", {})

    def rows(self) -> dict[str, dict[str, Any]]:
        with self._lock:
            return {key: entry["row"] for key, entry in self._state.get("rows", {}).items()}

    @property
    def run_id(self) -> str:
        return self._state.get("run_id", "")

    @property
    def failures(self) -> list[dict[str, str]]:
        with self._lock:
            return list(self._state.get("failures", []))

    @property
    def finished_count(self) -> int:
        with self._lock:
            return len(self._state.get("rows", {}))

    def discard(self) -> None:
        """Delete the stored rows; a missing file is fine."""
        self._path.unlink(missing_ok=True)
