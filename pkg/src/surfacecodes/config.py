"""Pydantic models for engine and reproduction configuration."""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

from pydantic import BaseModel, Field, field_validator

logger = logging.getLogger(__name__)

THREADS_ENV = "SURFACECODES_THREADS"


def resolve_workers(requested: int) -> int:
    """SURFACECODES_THREADS, when set to a positive integer, wins over the requested count."""
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            value = int(raw)
        except ValueError:
            logger.warning("Ignoring non-integer %s=%r", THREADS_ENV, raw)
        else:
            if value >= 1:
                return value
            logger.warning("Ignoring %s=%d; must be at least 1", THREADS_ENV, value)
    return requested


class EngineConfig(BaseModel):
    """How to compute one minimum distance."""

    engine: str = "isd"
    budget: int | None = Field(default=None, ge=1)
    seed: int = 0
    workers: int = Field(default=1, ge=1, le=64)
    target: int | None = Field(default=None, ge=1)
    probe: int = Field(default=0, ge=0)

    @field_validator("engine")
    @classmethod
    def _known_engine(cls, value: str) -> str:
        from surfacecodes.engines import ENGINE_REGISTRY

        if value not in ENGINE_REGISTRY:
            raise ValueError(f"unknown engine {value!r}")
        return value


class ReproduceConfig(BaseModel):
    """Full configuration of a table reproduction run."""

    table: str
    q: int | None = None
    engine: EngineConfig = Field(default_factory=EngineConfig)
    surface_file: Path | None = None
    chart_plane: tuple[int, int, int, int] | None = None
    best_known_file: Path | None = None
    output_dir: Path = Field(default=Path("./surfacecodes-output"))
    skip_distance: bool = False
    resume: bool = False
    fresh: bool = False
    json_only: bool = False
    verbose: bool = False

    @field_validator("table")
    @classmethod
    def _known_table(cls, value: str) -> str:
        from surfacecodes.tables import TABLE_REGISTRY

        if value not in TABLE_REGISTRY:
            raise ValueError(f"unknown table {value!r}")
        return value

    def config_hash(self) -> str:
        """Deterministic hash of the fields that change results, for checkpoint matching."""
        surface = None
        if self.surface_file is not None and self.surface_file.exists():
            surface = hashlib.sha256(self.surface_file.read_bytes()).hexdigest()
        key_fields = {
            "table": self.table,
            "q": self.q,
            "engine": self.engine.model_dump(exclude={"workers"}),
            "surface": surface,
            "chart_plane": self.chart_plane,
            "skip_distance": self.skip_distance,
        }
        blob = json.dumps(key_fields, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]
