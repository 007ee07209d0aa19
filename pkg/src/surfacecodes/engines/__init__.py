"""Distance engine registry and metadata."""

from __future__ import annotations

import importlib
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

from surfacecodes.exceptions import CodeError

if TYPE_CHECKING:
    from surfacecodes.code import LinearCode
    from surfacecodes.config import EngineConfig
    from surfacecodes.engines.base import DistanceEngine, DistanceResult
    from surfacecodes.executor import WorkerPool
    from surfacecodes.progress import ProgressDisplay

logger = logging.getLogger(__name__)


@dataclass
class EngineMeta:
    """Metadata about a distance engine."""

    description: str
    engine_class: str  # Class name, imported lazily
    module: str
    exact: bool


ENGINE_REGISTRY: dict[str, EngineMeta] = {
    "exhaustive": EngineMeta(
        description="Every message up to scaling; exact, limited to q^k <= budget",
        engine_class="ExhaustiveEngine",
        module="surfacecodes.engines.exhaustive",
        exact=True,
    ),
    "isd": EngineMeta(
        description="Brouwer-Zimmermann over disjoint information sets; exact or interval",
        engine_class="BrouwerZimmermannEngine",
        module="surfacecodes.engines.isd",
        exact=True,
    ),
    "random": EngineMeta(
        description="Seeded Lee-Brickell sampling; upper bound only",
        engine_class="RandomInformationSetEngine",
        module="surfacecodes.engines.random",
        exact=False,
    ),
}


def get_engine_class(name: str) -> type[DistanceEngine]:
    """Import and return the engine class for a registered name."""
    meta = ENGINE_REGISTRY.get(name)
    if meta is None:
        raise CodeError(f"Unknown engine {name!r}; choose from {', '.join(ENGINE_REGISTRY)}")
    module = importlib.import_module(meta.module)
    return getattr(module, meta.engine_class)


def compute_distance(
    code: LinearCode,
    config: EngineConfig,
    pool: WorkerPool | None = None,
    progress: ProgressDisplay | None = None,
    target: int | None = None,
) -> DistanceResult:
    """Run the configured engine; `target` overrides the configured one when given."""
    engine_class = get_engine_class(config.engine)
    engine = engine_class(
        code,
        budget=config.budget,
        seed=config.seed,
        target=target if target is not None else config.target,
        probe=config.probe,
        pool=pool,
        progress=progress,
    )
    logger.debug("Running %s on %r", config.engine, code)
    return engine.run()
