"""Exact minimum distance by enumerating every message up to scaling."""

from __future__ import annotations

import logging
from functools import partial

import numpy as np

from surfacecodes.engines.base import Certainty, DistanceEngine, DistanceResult
from surfacecodes.exceptions import BudgetExceededError
from surfacecodes.gf import DTYPE, Field
from surfacecodes.linalg import combine_rows
from surfacecodes.projspace import all_vectors, canonicalize, iter_point_chunks

logger = logging.getLogger(__name__)

SUFFIX_ELEMENTS = 1 << 20
BLOCK_ELEMENTS = 1 << 22


def _block_min(
    field: Field, prefix_rows: np.ndarray, suffix_words: np.ndarray, block: np.ndarray
) -> tuple[int, np.ndarray, int]:
    """Lightest prefix*G_prefix + s over the block of normalised prefixes and every suffix s."""
    heads = combine_rows(field, block, prefix_rows)
    words = field.add(heads[:, None, :], suffix_words[None, :, :])
    weights = np.count_nonzero(words, axis=2)
    flat = int(np.argmin(weights))
    row, col = divmod(flat, weights.shape[1])
    found = np.concatenate([block[row], np.array([col])])
    return int(weights[row, col]), found, weights.size


class ExhaustiveEngine(DistanceEngine):
    """Walks all (q^k - 1)/(q - 1) normalised messages; the oracle engine.

    Messages split into a prefix and a suffix of t digits; the q^t suffix
    combinations are tabulated once and added to each prefix block.
    """

    name = "exhaustive"
    description = "Enumerate every message (q^k within budget), exact"
    default_budget = 1 << 26

    def run(self) -> DistanceResult:
        code = self.code
        field = code.field
        q, k, n = field.q, code.k, code.n
        if k == 0:
            return self._empty_code_result()
        if q**k > self.budget:
            raise BudgetExceededError(f"q^k = {q}^{k} exceeds the exhaustive budget {self.budget}")

        t = 1
        while t < k and q ** (t + 1) * n <= SUFFIX_ELEMENTS:
            t += 1
        generator = code.generator.data
        suffixes = all_vectors(q, t)
        suffix_words = combine_rows(field, suffixes, generator[k - t :])

        # zero prefix: the suffix alone, normalised
        nonzero = suffixes[suffixes.any(axis=1)]
        normalised = np.unique(canonicalize(field, nonzero), axis=0)
        tail_words = combine_rows(field, normalised, generator[k - t :])
        tail_weights = np.count_nonzero(tail_words, axis=1)
        best_row = int(np.argmin(tail_weights))
        best = int(tail_weights[best_row])
        message = np.concatenate([np.zeros(k - t, dtype=DTYPE), normalised[best_row]])
        enumerated = len(normalised)

        prefix_len = k - t
        if prefix_len:
            rows = max(1, BLOCK_ELEMENTS // (len(suffixes) * n))
            blocks = iter_point_chunks(prefix_len - 1, field, rows=rows)
            task = partial(_block_min, field, generator[:prefix_len], suffix_words)
            results = self.pool.map_ordered(task, blocks)
            for weight, found, count in results:
                enumerated += count
                if weight < best:
                    best = weight
                    message = np.concatenate([found[:-1], suffixes[int(found[-1])]])
            if self.pool.should_stop:
                logger.warning("Exhaustive search interrupted; distance <= %d", best)
                word = self._word(message)
                return self._result(Certainty.UPPER_BOUND, None, best, word, enumerated)
        self._increment_stat("candidates", enumerated)
        return self._result(Certainty.EXACT, best, best, self._word(message), enumerated)

    def _word(self, message: np.ndarray) -> np.ndarray:
        return self.code.encode(message.astype(DTYPE))[0]
