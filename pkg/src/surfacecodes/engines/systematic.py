"""Systematic generators on chosen information sets and low-weight message enumeration."""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from surfacecodes.code import LinearCode
from surfacecodes.gf import DTYPE, Field
from surfacecodes.linalg import combine_rows, rref_array

BLOCK_ELEMENTS = 1 << 21
MAX_TAIL_ROWS = 1 << 20


@dataclass
class SystematicForm:
    """Generator reduced to the identity on an information set.

    `rank` counts the information positions taken from the columns the form
    was asked to prefer; the others come from elsewhere in the code.
    """

    field: Field
    info: np.ndarray
    redundant: np.ndarray
    generator: np.ndarray
    rank: int

    @classmethod
    def from_columns(cls, code: LinearCode, preferred: Sequence[int]) -> SystematicForm:
        """Pivot first on `preferred` columns, then on the rest in index order."""
        preferred = [int(c) for c in preferred]
        chosen = set(preferred)
        order = preferred + [c for c in range(code.n) if c not in chosen]
        reduced, pivots = rref_array(code.field, code.generator.data[:, order])
        generator = np.empty_like(reduced)
        generator[:, order] = reduced
        info = np.array([order[p] for p in pivots], dtype=DTYPE)
        rank = sum(1 for p in pivots if p < len(preferred))
        taken = set(info.tolist())
        redundant = np.array([c for c in range(code.n) if c not in taken], dtype=DTYPE)
        return cls(code.field, info, redundant, generator, rank)

    @property
    def k(self) -> int:
        return len(self.info)

    @property
    def parity_part(self) -> np.ndarray:
        """k x (n-k) block on the redundant columns."""
        return self.generator[:, self.redundant]

    def codeword(self, message: np.ndarray) -> np.ndarray:
        return combine_rows(self.field, message, self.generator)[0]

    def multiples(self) -> np.ndarray:
        """(k, q-1, n-k) table of a * row_i of the parity part for a = 1..q-1."""
        scalars = np.arange(1, self.field.q, dtype=DTYPE)
        part = self.parity_part
        return self.field.mul(scalars[None, :, None], part[:, None, :])


def tail_length(k: int, q: int, w: int) -> int:
    """Positions enumerated as one vectorised block: two when the pair table stays small."""
    if w >= 2 and comb(k, 2) * (q - 1) ** 2 <= MAX_TAIL_ROWS:
        return 2
    return 1


def level_size(k: int, q: int, w: int) -> int:
    """Messages of weight w with leading coefficient 1."""
    return comb(k, w) * (q - 1) ** (w - 1) if 1 <= w <= k else 0


@lru_cache(maxsize=32)
def tail_index(k: int, q: int, t: int, leading_one: bool) -> tuple[np.ndarray, np.ndarray]:
    """Positions and coefficient values of every weight-t tail, sorted by first position."""
    first = (1,) if leading_one else tuple(range(1, q))
    pos_rows, coef_rows = [], []
    for combo in itertools.combinations(range(k), t):
        for coeffs in itertools.product(first, *[range(1, q)] * (t - 1)):
            pos_rows.append(combo)
            coef_rows.append(coeffs)
    positions = np.asarray(pos_rows, dtype=DTYPE).reshape(-1, t)
    coefficients = np.asarray(coef_rows, dtype=DTYPE).reshape(-1, t)
    positions.flags.writeable = False
    coefficients.flags.writeable = False
    return positions, coefficients


@dataclass
class TailTable:
    """All weight-t tails (t = 1 or 2) with their redundant sums, grouped by first position."""

    positions: np.ndarray
    coefficients: np.ndarray
    sums: np.ndarray
    starts: np.ndarray

    @classmethod
    def build(cls, field: Field, mults: np.ndarray, t: int, leading_one: bool) -> TailTable:
        k = mults.shape[0]
        positions, coefficients = tail_index(k, field.q, t, leading_one)
        sums = mults[positions[:, 0], coefficients[:, 0] - 1]
        for j in range(1, t):
            sums = field.add(sums, mults[positions[:, j], coefficients[:, j] - 1])
        starts = np.searchsorted(positions[:, 0], np.arange(k + 1), side="left")
        return cls(positions, coefficients, sums, starts)

    def after(self, position: int) -> slice:
        """Rows whose first position is greater than `position`."""
        return slice(int(self.starts[position + 1]) if position >= 0 else 0, len(self.positions))


@dataclass
class LevelBest:
    """Lightest codeword seen in one block of a level enumeration."""

    weight: int | None
    message: np.ndarray | None
    enumerated: int


Head = tuple[tuple[int, ...], tuple[int, ...]]


def head_blocks(k: int, q: int, w: int, t: int) -> Iterator[list[Head]]:
    """Head (positions, coefficients) pairs for the leading w-t message positions.

    The first head coefficient is 1. Heads are yielded in lexicographic order,
    grouped so that each block covers a bounded amount of work.
    """
    h = w - t
    if h == 0:
        yield [((), ())]
        return
    block: list[Head] = []
    for combo in itertools.combinations(range(k - t), h):
        for rest in itertools.product(range(1, q), repeat=h - 1):
            block.append((combo, (1, *rest)))
            if len(block) >= 64:
                yield block
                block = []
    if block:
        yield block


def scan_heads(
    form: SystematicForm,
    mults: np.ndarray,
    tails: TailTable,
    heads: list[Head],
    w: int,
) -> LevelBest:
    """Minimum weight over messages made of each head followed by every admissible tail."""
    field = form.field
    best_weight: int | None = None
    best_message: np.ndarray | None = None
    enumerated = 0
    width = tails.sums.shape[1]
    rows_per_chunk = max(1, BLOCK_ELEMENTS // max(width, 1))
    for positions, coefficients in heads:
        base = np.zeros(width, dtype=DTYPE)
        for pos, coeff in zip(positions, coefficients):
            base = field.add(base, mults[pos, coeff - 1])
        span = tails.after(positions[-1] if positions else -1)
        for start in range(span.start, span.stop, rows_per_chunk):
            stop = min(start + rows_per_chunk, span.stop)
            sums = field.add(tails.sums[start:stop], base[None, :])
            weights = np.count_nonzero(sums, axis=1)
            enumerated += stop - start
            if not len(weights):
                continue
            idx = int(np.argmin(weights))
            candidate = int(weights[idx]) + w
            if best_weight is None or candidate < best_weight:
                best_weight = candidate
                message = np.zeros(form.k, dtype=DTYPE)
                message[list(positions)] = coefficients
                row = start + idx
                message[tails.positions[row]] = tails.coefficients[row]
                best_message = message
    return LevelBest(best_weight, best_message, enumerated)


def reduce_blocks(blocks: list[LevelBest]) -> LevelBest:
    """Lightest over blocks; the earliest block wins ties."""
    best = LevelBest(None, None, 0)
    for block in blocks:
        best.enumerated += block.enumerated
        if block.weight is not None and (best.weight is None or block.weight < best.weight):
            best.weight = block.weight
            best.message = block.message
    return best
