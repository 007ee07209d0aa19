"""Randomised low-weight search (Lee-Brickell) giving an upper bound."""

from __future__ import annotations

import logging

import numpy as np

from surfacecodes.engines.base import Certainty, DistanceEngine, DistanceResult
from surfacecodes.engines.systematic import SystematicForm, TailTable, scan_heads

logger = logging.getLogger(__name__)

MESSAGE_WEIGHT = 2


class RandomInformationSetEngine(DistanceEngine):
    """Samples information sets and tries every message of weight <= 2 on each.

    The budget is the number of information sets; the best weight so far can
    only drop as the budget grows for a fixed seed.
    """

    name = "random"
    description = "Seeded Lee-Brickell sampling, upper bound only"
    default_budget = 100

    def run(self) -> DistanceResult:
        code = self.code
        if code.k == 0:
            return self._empty_code_result()
        rng = np.random.default_rng(self.seed)
        best: int | None = None
        witness: np.ndarray | None = None
        enumerated = 0
        for iteration in range(self.budget):
            if self.pool.should_stop:
                break
            form = SystematicForm.from_columns(code, rng.permutation(code.n).tolist())
            mults = form.multiples()
            for w in range(1, min(MESSAGE_WEIGHT, code.k) + 1):
                tails = TailTable.build(code.field, mults, w, leading_one=True)
                level = scan_heads(form, mults, tails, [((), ())], w)
                enumerated += level.enumerated
                if level.weight is not None and (best is None or level.weight < best):
                    best = level.weight
                    witness = form.codeword(level.message)
                    logger.debug("Iteration %d: weight %d", iteration, best)
            self._increment_stat("information sets")
        return self._result(Certainty.UPPER_BOUND, None, best, witness, enumerated)
