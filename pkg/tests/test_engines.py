"""Tests for the distance engines, their registry and result merging."""

import numpy as np
import pytest

from surfacecodes.code import LinearCode
from surfacecodes.config import EngineConfig
from surfacecodes.engines import ENGINE_REGISTRY, compute_distance, get_engine_class
from surfacecodes.engines.base import (
    Certainty,
    DistanceResult,
    certify,
    check_witness,
    combine,
    witness_result,
)
from surfacecodes.engines.exhaustive import ExhaustiveEngine
from surfacecodes.engines.isd import BrouwerZimmermannEngine, information_forms
from surfacecodes.engines.random import RandomInformationSetEngine
from surfacecodes.engines.systematic import SystematicForm, level_size, tail_length
from surfacecodes.exceptions import BudgetExceededError, CodeError
from surfacecodes.executor import WorkerPool
from surfacecodes.gf import field_from_order
from surfacecodes.linalg import Matrix

MAX_K = {2: 10, 3: 8, 4: 6}


def _oracle_cases():
    rng = np.random.default_rng(2024)
    cases = []
    for seed in range(100):
        q = int(rng.choice([2, 3, 4]))
        n = int(rng.integers(6, 21))
        k = int(rng.integers(1, min(MAX_K[q], n - 1) + 1))
        cases.append((q, n, k, seed))
    return cases


class TestRegistry:
    def test_entries(self):
        assert set(ENGINE_REGISTRY) == {"exhaustive", "isd", "random"}
        assert get_engine_class("isd") is BrouwerZimmermannEngine
        assert get_engine_class("exhaustive") is ExhaustiveEngine
        assert get_engine_class("random") is RandomInformationSetEngine

    def test_unknown_engine(self):
        with pytest.raises(CodeError, match="Unknown engine"):
            get_engine_class("sieve")

    def test_compute_distance_dispatch(self, hamming_code, mocker):
        spy = mocker.spy(ExhaustiveEngine, "run")
        result = compute_distance(hamming_code, EngineConfig(engine="exhaustive"))
        assert spy.call_count == 1
        assert result.engine == "exhaustive"
        assert result.value == 3

    def test_target_override(self, hamming_code):
        result = compute_distance(hamming_code, EngineConfig(engine="isd", target=7), target=4)
        assert result.upper <= 4


class TestOracleEquivalence:
    @pytest.mark.parametrize("q,n,k,seed", _oracle_cases())
    def test_isd_matches_exhaustive(self, q, n, k, seed, random_code):
        code = random_code(field_from_order(q), n, k, seed)
        exact = ExhaustiveEngine(code).run()
        isd = BrouwerZimmermannEngine(code, seed=seed).run()
        assert exact.certainty is Certainty.EXACT
        assert isd.certainty is Certainty.EXACT
        assert isd.value == exact.value
        assert np.count_nonzero(isd.witness) == isd.value

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(20))
    def test_isd_matches_exhaustive_dimension_ten(self, seed, random_code):
        field = field_from_order(4)
        code = random_code(field, 20, 10, seed)
        assert BrouwerZimmermannEngine(code).run().value == ExhaustiveEngine(code).run().value


class TestExhaustiveEngine:
    def test_budget(self, hamming_code):
        with pytest.raises(BudgetExceededError):
            ExhaustiveEngine(hamming_code, budget=8).run()

    def test_witness_is_codeword(self, random_code, gf5):
        code = random_code(gf5, 9, 4, seed=11)
        result = ExhaustiveEngine(code).run()
        assert code.contains(np.array(result.witness))
        assert result.enumerated == (5**code.k - 1) // 4

    def test_workers_do_not_change_result(self, random_code, gf2):
        # long enough that the prefix blocks go through the pool
        code = random_code(gf2, 24, 18, seed=5)
        single = ExhaustiveEngine(code).run()
        pooled = ExhaustiveEngine(code, pool=WorkerPool(3)).run()
        assert single.witness == pooled.witness
        assert single.value == pooled.value

    def test_interrupted_gives_upper_bound(self, random_code, gf2):
        code = random_code(gf2, 24, 18, seed=2)
        pool = WorkerPool(1)
        pool.request_shutdown()
        result = ExhaustiveEngine(code, pool=pool).run()
        assert result.certainty is Certainty.UPPER_BOUND


class TestBrouwerZimmermannEngine:
    def test_information_forms_are_disjoint(self, random_code, gf3):
        code = random_code(gf3, 15, 5, seed=8)
        forms = information_forms(code, seed=0)
        owned = [set(f.info[: f.rank].tolist()) for f in forms]
        assert forms[0].rank == code.k
        for i, a in enumerate(owned):
            for b in owned[i + 1 :]:
                assert not a & b

    def test_budget_exhaustion_before_any_word(self, hamming_code):
        result = BrouwerZimmermannEngine(hamming_code, budget=1).run()
        assert result.certainty is Certainty.LOWER_BOUND
        assert result.marker() == ">=1"

    def test_budget_exhaustion_interval(self, random_code, gf4):
        code = random_code(gf4, 20, 8, seed=3)
        result = BrouwerZimmermannEngine(code, budget=level_size(8, 4, 1) + 1).run()
        assert result.certainty in (Certainty.INTERVAL, Certainty.EXACT)
        assert result.lower <= result.upper

    def test_target_stops_early(self, hamming_code):
        result = BrouwerZimmermannEngine(hamming_code, target=3).run()
        assert result.upper == 3
        assert result.certainty in (Certainty.EXACT, Certainty.UPPER_BOUND)

    def test_probe_reaches_target(self, hamming_code):
        result = BrouwerZimmermannEngine(hamming_code, target=4, probe=10).run()
        assert result.certainty is Certainty.UPPER_BOUND
        assert result.upper <= 4

    def test_workers_do_not_change_result(self, random_code, gf4):
        code = random_code(gf4, 18, 7, seed=9)
        single = BrouwerZimmermannEngine(code, seed=1).run()
        pooled = BrouwerZimmermannEngine(code, seed=1, pool=WorkerPool(4)).run()
        assert single.to_dict() | {"millis": 0} == pooled.to_dict() | {"millis": 0}

    def test_progress_hooks(self, hamming_code, mocker):
        progress = mocker.Mock()
        BrouwerZimmermannEngine(hamming_code, progress=progress).run()
        assert progress.update_status.called
        progress.increment_stat.assert_any_call("candidates", mocker.ANY)


class TestRandomEngine:
    def test_more_budget_never_worse(self, random_code, gf4):
        code = random_code(gf4, 16, 5, seed=6)
        small = RandomInformationSetEngine(code, budget=2, seed=0).run()
        large = RandomInformationSetEngine(code, budget=20, seed=0).run()
        assert large.upper <= small.upper
        assert large.upper >= ExhaustiveEngine(code).run().value


class TestSystematic:
    def test_identity_on_information_set(self, random_code, gf5):
        code = random_code(gf5, 10, 4, seed=1)
        form = SystematicForm.from_columns(code, [9, 8, 7, 6, 5, 4, 3, 2, 1, 0])
        assert np.array_equal(form.generator[:, form.info], np.eye(code.k, dtype=int))
        assert form.multiples().shape == (code.k, 4, 10 - code.k)

    def test_tail_length(self):
        assert tail_length(10, 4, 1) == 1
        assert tail_length(10, 4, 3) == 2
        assert level_size(5, 3, 2) == 10 * 2


class TestResults:
    def test_markers(self):
        assert DistanceResult("isd", Certainty.EXACT, 5, 5).marker() == "=5"
        assert DistanceResult("isd", Certainty.LOWER_BOUND, 5, None).marker() == ">=5"
        assert DistanceResult("random", Certainty.UPPER_BOUND, None, 7).marker() == "<=7"
        assert DistanceResult("isd", Certainty.INTERVAL, 5, 7).marker() == "[5,7]"

    def test_dict_round_trip(self):
        result = DistanceResult(
            "isd", Certainty.INTERVAL, 4, 6, witness=[1, 0, 2], enumerated=9, certified_by="bound"
        )
        data = result.to_dict()
        assert data["schema"] == 1
        assert data["value"] is None
        assert DistanceResult.from_dict(data) == result

    def test_certify_exact(self):
        witness = DistanceResult("line-witness", Certainty.UPPER_BOUND, None, 4)
        merged = certify(4, witness)
        assert merged.certainty is Certainty.EXACT
        assert merged.certified_by == "bound+witness"

    def test_certify_interval_and_lower(self):
        assert certify(3, DistanceResult("r", Certainty.UPPER_BOUND, None, 5)).marker() == "[3,5]"
        assert certify(3, DistanceResult("r", Certainty.LOWER_BOUND, 1, None)).marker() == ">=3"

    def test_certify_contradiction(self):
        with pytest.raises(CodeError):
            certify(6, DistanceResult("r", Certainty.UPPER_BOUND, None, 5))

    def test_certify_without_bound(self):
        result = DistanceResult("r", Certainty.UPPER_BOUND, None, 5)
        assert certify(None, result) is result

    def test_combine(self):
        engine = DistanceResult("isd", Certainty.INTERVAL, 3, 6)
        witness = DistanceResult("line-witness", Certainty.UPPER_BOUND, None, 3, witness=[1])
        merged = combine(engine, witness)
        assert merged.certainty is Certainty.EXACT
        assert merged.upper == 3
        assert merged.witness == [1]

    def test_witness_checks(self, hamming_code):
        word = hamming_code.encode(np.array([1, 0, 0, 0]))[0]
        result = witness_result(hamming_code, word, "constructed")
        assert result.upper == int(np.count_nonzero(word))
        with pytest.raises(CodeError):
            check_witness(hamming_code, [1, 0, 0, 0, 0, 0, 0], 1)
        with pytest.raises(CodeError):
            check_witness(hamming_code, word, 1)

    def test_rank_deficient_generator(self, gf3):
        code = LinearCode.from_generator(Matrix.from_rows(gf3, [[1, 2, 0, 1], [2, 1, 0, 2]]))
        assert ExhaustiveEngine(code).run().value == 3
        assert BrouwerZimmermannEngine(code).run().value == 3
