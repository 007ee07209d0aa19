"""Linear codes over GF(q)."""

from __future__ import annotations

import logging
from collections.abc import Iterable
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np

from surfacecodes.exceptions import CodeError, EmptyCodeError, ShapeMismatchError
from surfacecodes.gf import DTYPE, Field
from surfacecodes.linalg import Matrix, combine_rows, nullspace, rref

if TYPE_CHECKING:
    from surfacecodes.engines.base import DistanceResult
    from surfacecodes.executor import WorkerPool

logger = logging.getLogger(__name__)


class LinearCode:
    """An [n, k] code held by its reduced row echelon generator.

    k = 0 is allowed for codes obtained as duals or punctures; such a code has
    a generator with no rows.
    """

    def __init__(self, generator: Matrix, pivots: tuple[int, ...]) -> None:
        self.generator = generator
        self.pivots = pivots

    @classmethod
    def from_generator(cls, matrix: Matrix) -> LinearCode:
        """Code spanned by the rows of `matrix`; raises EmptyCodeError when it spans nothing."""
        code = cls._from_rows(matrix)
        if code.k == 0:
            raise EmptyCodeError("generator matrix spans the zero code")
        return code

    @classmethod
    def _from_rows(cls, matrix: Matrix) -> LinearCode:
        ech = rref(matrix)
        return cls(ech.basis, ech.pivots)

    @property
    def field(self) -> Field:
        return self.generator.field

    @property
    def n(self) -> int:
        return self.generator.cols

    @property
    def k(self) -> int:
        return self.generator.rows

    @cached_property
    def parity_check(self) -> Matrix:
        """(n-k) x n matrix H with G H^T = 0."""
        if self.k == 0:
            return Matrix.identity(self.field, self.n)
        return nullspace(self.generator)

    def dual(self) -> LinearCode:
        return LinearCode._from_rows(self.parity_check)

    def puncture(self, positions: Iterable[int]) -> LinearCode:
        """Delete the given coordinates."""
        removed = set(int(p) for p in positions)
        if any(not 0 <= p < self.n for p in removed):
            raise CodeError(f"puncture positions must lie in [0, {self.n})")
        kept = [c for c in range(self.n) if c not in removed]
        if not kept:
            raise CodeError("cannot puncture every coordinate")
        if self.k == 0:
            return LinearCode(Matrix.zeros(self.field, 0, len(kept)), ())
        return LinearCode._from_rows(self.generator.select_columns(kept))

    def encode(self, messages: np.ndarray) -> np.ndarray:
        """Codewords for the rows of `messages` (length k each)."""
        messages = np.atleast_2d(np.asarray(messages, dtype=DTYPE))
        if messages.shape[1] != self.k:
            raise ShapeMismatchError(f"messages need length {self.k}, got {messages.shape[1]}")
        return combine_rows(self.field, messages, self.generator.data)

    def syndrome(self, word: np.ndarray) -> np.ndarray:
        word = np.asarray(word, dtype=DTYPE)
        if word.shape[-1] != self.n:
            raise ShapeMismatchError(f"word needs length {self.n}, got {word.shape[-1]}")
        return combine_rows(self.field, word, self.parity_check.data.T)

    def contains(self, word: np.ndarray) -> bool:
        if self.parity_check.rows == 0:
            self.syndrome(word)
            return True
        return not self.syndrome(word).any()

    def __repr__(self) -> str:
        return f"[{self.n},{self.k}] code over {self.field!r}"


def weight(word: np.ndarray) -> int:
    return int(np.count_nonzero(word))


def min_distance_exhaustive(
    code: LinearCode, budget: int | None = None, pool: WorkerPool | None = None
) -> DistanceResult:
    from surfacecodes.engines.exhaustive import ExhaustiveEngine

    return ExhaustiveEngine(code, budget=budget, pool=pool).run()


def min_distance_isd(
    code: LinearCode,
    target: int | None = None,
    budget: int | None = None,
    seed: int = 0,
    probe: int = 0,
    pool: WorkerPool | None = None,
) -> DistanceResult:
    from surfacecodes.engines.isd import BrouwerZimmermannEngine

    engine = BrouwerZimmermannEngine(
        code, budget=budget, seed=seed, target=target, probe=probe, pool=pool
    )
    return engine.run()


def min_weight_random(code: LinearCode, budget: int = 100, seed: int = 0) -> DistanceResult:
    from surfacecodes.engines.random import RandomInformationSetEngine

    return RandomInformationSetEngine(code, budget=budget, seed=seed).run()
