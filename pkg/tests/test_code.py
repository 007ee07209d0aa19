"""Tests for linear codes."""

import numpy as np
import pytest

from surfacecodes.code import (
    LinearCode,
    min_distance_exhaustive,
    min_distance_isd,
    min_weight_random,
    weight,
)
from surfacecodes.engines.base import Certainty
from surfacecodes.exceptions import CodeError, EmptyCodeError, ShapeMismatchError
from surfacecodes.linalg import Matrix, row_space_equal


class TestLinearCode:
    def test_dimensions(self, hamming_code):
        assert (hamming_code.n, hamming_code.k) == (7, 4)
        assert hamming_code.parity_check.shape == (3, 7)
        assert repr(hamming_code) == "[7,4] code over GF(2)"

    def test_generator_is_reduced(self, gf5):
        code = LinearCode.from_generator(Matrix.from_rows(gf5, [[2, 4, 1], [4, 3, 2]]))
        assert code.k == 1
        assert code.generator.data.tolist() == [[1, 2, 3]]
        assert code.pivots == (0,)

    def test_zero_generator_rejected(self, gf4):
        with pytest.raises(EmptyCodeError):
            LinearCode.from_generator(Matrix.zeros(gf4, 2, 3))

    def test_dual_of_dual(self, random_code, gf9):
        code = random_code(gf9, 8, 3, seed=4)
        assert row_space_equal(code.dual().dual().generator, code.generator)
        assert code.dual().k == code.n - code.k

    def test_dual_of_full_space_is_zero(self, gf4):
        code = LinearCode.from_generator(Matrix.identity(gf4, 3))
        dual = code.dual()
        assert dual.k == 0
        assert dual.dual().k == 3

    def test_encode_and_contains(self, hamming_code):
        words = hamming_code.encode(np.array([[1, 0, 1, 1], [0, 1, 1, 0]]))
        assert all(hamming_code.contains(w) for w in words)
        assert not hamming_code.contains(np.array([1, 0, 0, 0, 0, 0, 0]))
        with pytest.raises(ShapeMismatchError):
            hamming_code.encode(np.array([1, 0]))

    def test_syndrome_of_codeword_is_zero(self, hamming_code):
        word = hamming_code.encode(np.array([1, 1, 1, 1]))[0]
        assert not hamming_code.syndrome(word).any()
        with pytest.raises(ShapeMismatchError):
            hamming_code.syndrome(np.zeros(5, dtype=int))

    def test_puncture(self, hamming_code):
        punctured = hamming_code.puncture([6])
        assert (punctured.n, punctured.k) == (6, 4)
        assert hamming_code.puncture([0, 1, 2, 3]).k == 3

    def test_puncture_errors(self, hamming_code):
        with pytest.raises(CodeError):
            hamming_code.puncture([7])
        with pytest.raises(CodeError):
            hamming_code.puncture(range(7))

    def test_weight(self):
        assert weight(np.array([0, 3, 0, 1])) == 2


class TestDistanceHelpers:
    def test_hamming_distance(self, hamming_code):
        exact = min_distance_exhaustive(hamming_code)
        assert exact.certainty is Certainty.EXACT
        assert exact.value == 3
        isd = min_distance_isd(hamming_code)
        assert (isd.certainty, isd.value) == (Certainty.EXACT, 3)

    def test_hamming_dual_is_simplex(self, hamming_code):
        # every nonzero word of the [7,3] simplex code has weight 4
        assert min_distance_exhaustive(hamming_code.dual()).value == 4

    def test_random_upper_bound(self, hamming_code):
        result = min_weight_random(hamming_code, budget=20, seed=3)
        assert result.certainty is Certainty.UPPER_BOUND
        assert result.upper >= 3
        assert weight(np.array(result.witness)) == result.upper

    def test_zero_code(self, gf4):
        dual = LinearCode.from_generator(Matrix.identity(gf4, 3)).dual()
        result = min_distance_isd(dual)
        assert result.certainty is Certainty.EXACT
        assert result.value is None
        assert result.marker() == "-"
