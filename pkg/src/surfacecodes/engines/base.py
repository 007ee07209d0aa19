"""Abstract distance engine and the distance result model."""

from __future__ import annotations

import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING, Any

import numpy as np

from surfacecodes.exceptions import CodeError
from surfacecodes.executor import WorkerPool

if TYPE_CHECKING:
    from surfacecodes.code import LinearCode
    from surfacecodes.progress import ProgressDisplay

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class Certainty(StrEnum):
    EXACT = "exact"
    LOWER_BOUND = "lower-bound"
    UPPER_BOUND = "upper-bound"
    INTERVAL = "interval"


@dataclass
class DistanceResult:
    """Minimum distance knowledge about one code.

    `lower`/`upper` are None when unknown; both are None for the zero code,
    whose distance is absent.
    """

    engine: str
    certainty: Certainty
    lower: int | None
    upper: int | None
    witness: list[int] | None = None
    enumerated: int = 0
    millis: int = 0
    certified_by: str | None = None

    @property
    def value(self) -> int | None:
        if self.certainty in (Certainty.EXACT, Certainty.UPPER_BOUND):
            return self.upper
        if self.certainty is Certainty.LOWER_BOUND:
            return self.lower
        return None

    def marker(self) -> str:
        """CSV cell: =d, >=d, <=d or [lo,hi]; '-' for an absent distance."""
        if self.certainty is Certainty.EXACT:
            return "-" if self.upper is None else f"={self.upper}"
        if self.certainty is Certainty.LOWER_BOUND:
            return f">={self.lower}"
        if self.certainty is Certainty.UPPER_BOUND:
            return f"<={self.upper}"
        return f"[{self.lower},{self.upper}]"

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "engine": self.engine,
            "value": self.value,
            "certainty": self.certainty.value,
            "lower": self.lower,
            "upper": self.upper,
            "enumerated": self.enumerated,
            "millis": self.millis,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.certified_by is not None:
            out["certified_by"] = self.certified_by
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> DistanceResult:
        return cls(
            engine=data["engine"],
            certainty=Certainty(data["certainty"]),
            lower=data.get("lower"),
            upper=data.get("upper"),
            witness=data.get("witness"),
            enumerated=data.get("enumerated", 0),
            millis=data.get("millis", 0),
            certified_by=data.get("certified_by"),
        )


class DistanceEngine(ABC):
    """Base class for minimum distance engines."""

    name: str = ""
    description: str = ""
    default_budget: int = 1 << 26

    def __init__(
        self,
        code: LinearCode,
        budget: int | None = None,
        seed: int = 0,
        target: int | None = None,
        probe: int = 0,
        pool: WorkerPool | None = None,
        progress: ProgressDisplay | None = None,
    ) -> None:
        self.code = code
        self.budget = budget if budget is not None else self.default_budget
        self.seed = seed
        self.target = target
        self.probe = probe
        self.pool = pool or WorkerPool(1)
        self.progress = progress
        self._started = time.perf_counter()

    @abstractmethod
    def run(self) -> DistanceResult:
        """Search and return what is known about the minimum distance."""

    def _millis(self) -> int:
        return int((time.perf_counter() - self._started) * 1000)

    def _result(self, certainty: Certainty, lower, upper, witness=None, enumerated=0):
        if witness is not None:
            witness = [int(x) for x in witness]
            check_witness(self.code, witness, upper)
        return DistanceResult(
            engine=self.name,
            certainty=certainty,
            lower=lower,
            upper=upper,
            witness=witness,
            enumerated=enumerated,
            millis=self._millis(),
        )

    def _empty_code_result(self) -> DistanceResult:
        return self._result(Certainty.EXACT, None, None)

    def _update_status(self, message: str) -> None:
        if self.progress:
            self.progress.update_status(message)

    def _increment_stat(self, name: str, count: int = 1) -> None:
        if self.progress:
            self.progress.increment_stat(name, count)


def check_witness(code: LinearCode, word, claimed: int | None) -> None:
    """A witness must be a nonzero codeword of the claimed weight."""
    word = np.asarray(word)
    found = int(np.count_nonzero(word))
    if found == 0 or (claimed is not None and found != claimed) or not code.contains(word):
        raise CodeError(f"witness of weight {found} is not a codeword of weight {claimed}")


def certify(lower_bound: int | None, result: DistanceResult) -> DistanceResult:
    """Merge a proven lower bound with an engine result."""
    if lower_bound is None or result.certainty is Certainty.EXACT:
        return result
    lower = max(lower_bound, result.lower or 0)
    upper = result.upper
    if upper is not None and lower > upper:
        raise CodeError(f"lower bound {lower} exceeds a codeword of weight {upper}")
    if upper is not None and lower == upper:
        certainty, by = Certainty.EXACT, "bound+witness"
    elif upper is None:
        certainty, by = Certainty.LOWER_BOUND, "bound"
    else:
        certainty, by = Certainty.INTERVAL, "bound"
    return DistanceResult(
        engine=result.engine,
        certainty=certainty,
        lower=lower,
        upper=upper,
        witness=result.witness,
        enumerated=result.enumerated,
        millis=result.millis,
        certified_by=by,
    )


def witness_result(code: LinearCode, word, source: str) -> DistanceResult:
    """Upper-bound result from a constructed codeword."""
    word = [int(x) for x in word]
    weight = int(np.count_nonzero(word))
    check_witness(code, word, weight)
    return DistanceResult(source, Certainty.UPPER_BOUND, None, weight, witness=word)


def combine(first: DistanceResult, second: DistanceResult) -> DistanceResult:
    """Tightest consistent interval from two results on the same code."""
    lowers = [r.lower for r in (first, second) if r.lower is not None]
    candidates = [r for r in (first, second) if r.upper is not None]
    lower = max(lowers) if lowers else None
    best = min(candidates, key=lambda r: r.upper) if candidates else None
    upper = best.upper if best else None
    if first.certainty is Certainty.EXACT and first.upper is None:
        return first
    if lower is not None and upper is not None and lower >= upper:
        certainty = Certainty.EXACT
    elif upper is None:
        certainty = Certainty.LOWER_BOUND
    elif lower is None:
        certainty = Certainty.UPPER_BOUND
    else:
        certainty = Certainty.INTERVAL
    return DistanceResult(
        engine=first.engine,
        certainty=certainty,
        lower=lower if certainty is not Certainty.EXACT else upper,
        upper=upper,
        witness=best.witness if best else None,
        enumerated=first.enumerated + second.enumerated,
        millis=first.millis + second.millis,
        certified_by=first.certified_by or second.certified_by,
    )
