"""Shared fixtures for tests."""

from __future__ import annotations

import numpy as np
import pytest

from surfacecodes.code import LinearCode
from surfacecodes.config import THREADS_ENV
from surfacecodes.gf import field_from_order
from surfacecodes.linalg import Matrix


@pytest.fixture(autouse=True)
def no_thread_override(monkeypatch):
    """Keep a developer's SURFACECODES_THREADS out of the tests."""
    monkeypatch.delenv(THREADS_ENV, raising=False)


@pytest.fixture
def gf2():
    return field_from_order(2)


@pytest.fixture
def gf3():
    return field_from_order(3)


@pytest.fixture
def gf4():
    return field_from_order(4)


@pytest.fixture
def gf5():
    return field_from_order(5)


@pytest.fixture
def gf8():
    return field_from_order(8)


@pytest.fixture
def gf9():
    return field_from_order(9)


@pytest.fixture
def gf16():
    return field_from_order(16)


@pytest.fixture
def hamming_code(gf2):
    """The [7,4,3] binary Hamming code."""
    rows = [
        [1, 0, 0, 0, 0, 1, 1],
        [0, 1, 0, 0, 1, 0, 1],
        [0, 0, 1, 0, 1, 1, 0],
        [0, 0, 0, 1, 1, 1, 1],
    ]
    return LinearCode.from_generator(Matrix.from_rows(gf2, rows))


@pytest.fixture
def random_code():
    """Factory for seeded random codes; the rank may fall below k."""

    def make(field, n: int, k: int, seed: int) -> LinearCode:
        rng = np.random.default_rng(seed)
        data = rng.integers(0, field.q, size=(k, n))
        if not data.any():
            data[0, 0] = 1
        return LinearCode.from_generator(Matrix(field, data))

    return make


@pytest.fixture
def make_row():
    """Factory for report rows shaped like the orchestrator's output."""

    def make(kind="elliptic-quadric", m=1, q=4, bound=4, distance=None, **extra):
        row = {
            "key": f"{kind}:m={m}",
            "q": q,
            "kind": kind,
            "m": m,
            "n": q * q,
            "k": (m + 1) ** 2,
            "dual_dimension": q * q - (m + 1) ** 2,
            "chart": "tangent plane at (1,0,0,0) [0,0,0,1]",
            "theorem": "basic",
            "bound_value": bound,
            "bound_verified": True,
            "expected_bound": bound,
            "bound": {"unjustified_exclusions": []},
            "distance": distance.to_dict() if distance is not None else None,
            "best_known": None,
        }
        row.update(extra)
        return row

    return make
