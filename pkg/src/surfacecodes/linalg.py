"""Dense matrices over GF(q): row reduction, rank, null space, serialization."""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from surfacecodes.exceptions import FormatError, ShapeMismatchError
from surfacecodes.gf import DTYPE, Field, field_from_order

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Matrix:
    """Row-major matrix over a fixed field.

    A matrix may have zero rows (the trivial subspace) but always has at
    least one column.
    """

    field: Field
    data: np.ndarray

    def __post_init__(self) -> None:
        data = np.array(self.data, dtype=DTYPE, copy=True)
        if data.ndim != 2 or data.shape[1] < 1:
            raise ShapeMismatchError(f"matrix needs two axes and at least one column: {data.shape}")
        if data.size and (data.min() < 0 or data.max() >= self.field.q):
            raise ShapeMismatchError(f"entries outside {self.field!r}")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @classmethod
    def from_rows(cls, field: Field, rows) -> Matrix:
        return cls(field, np.asarray(rows, dtype=DTYPE))

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> Matrix:
        return cls(field, np.zeros((rows, cols), dtype=DTYPE))

    @classmethod
    def identity(cls, field: Field, size: int) -> Matrix:
        return cls(field, np.eye(size, dtype=DTYPE))

    @classmethod
    def random(cls, field: Field, rows: int, cols: int, rng: np.random.Generator) -> Matrix:
        return cls(field, rng.integers(0, field.q, size=(rows, cols)))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def transpose(self) -> Matrix:
        return Matrix(self.field, self.data.T)

    def select_columns(self, columns) -> Matrix:
        return Matrix(self.field, self.data[:, list(columns)])

    def stack(self, other: Matrix) -> Matrix:
        _check_compatible(self, other)
        return Matrix(self.field, np.vstack([self.data, other.data]))

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.field != other.field or self.cols != other.rows:
            raise ShapeMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        return Matrix(self.field, combine_rows(self.field, self.data, other.data))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.data, other.data)

    def __hash__(self) -> int:
        return hash((self.field, self.data.shape, self.data.tobytes()))


def _check_compatible(a: Matrix, b: Matrix) -> None:
    if a.field != b.field:
        raise ShapeMismatchError(f"field mismatch: {a.field!r} vs {b.field!r}")
    if a.cols != b.cols:
        raise ShapeMismatchError(f"column mismatch: {a.cols} vs {b.cols}")


def combine_rows(field: Field, coeffs: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """coeffs @ rows over the field: (B x t) times (t x n)."""
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=DTYPE))
    rows = np.asarray(rows, dtype=DTYPE)
    out = np.zeros((coeffs.shape[0], rows.shape[1]), dtype=DTYPE)
    for t in range(rows.shape[0]):
        out = field.add(out, field.mul(coeffs[:, t, None], rows[t][None, :]))
    return out


@dataclass(frozen=True)
class RowEchelonForm:
    """Result of `rref`: the reduced matrix, its rank and pivot columns."""

    matrix: Matrix
    rank: int
    pivots: tuple[int, ...]

    @property
    def basis(self) -> Matrix:
        """The nonzero rows."""
        return Matrix(self.matrix.field, self.matrix.data[: self.rank])


def rref_array(field: Field, data: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduce in place; leftmost pivot column, first nonzero row at or below the cursor."""
    a = np.array(data, dtype=DTYPE, copy=True)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        candidates = np.flatnonzero(a[r:, c])
        if candidates.size == 0:
            continue
        p = r + int(candidates[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = field.mul(field.inv(a[r, c]), a[r])
        column = a[:, c].copy()
        column[r] = 0
        others = np.flatnonzero(column)
        if others.size:
            a[others] = field.sub(a[others], field.mul(column[others, None], a[r][None, :]))
        pivots.append(c)
        r += 1
    return a, pivots


def rref(matrix: Matrix) -> RowEchelonForm:
    reduced, pivots = rref_array(matrix.field, matrix.data)
    return RowEchelonForm(Matrix(matrix.field, reduced), len(pivots), tuple(pivots))


def rank(matrix: Matrix) -> int:
    return rref(matrix).rank


def nullspace(matrix: Matrix) -> Matrix:
    """Basis rows of {x : M x^T = 0}, one row per free column."""
    field = matrix.field
    ech = rref(matrix)
    reduced = ech.matrix.data
    pivot_set = set(ech.pivots)
    free = [c for c in range(matrix.cols) if c not in pivot_set]
    basis = np.zeros((len(free), matrix.cols), dtype=DTYPE)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pivot in enumerate(ech.pivots):
            basis[i, pivot] = field.neg(reduced[row, f])
    return Matrix(field, basis)


def row_space_equal(a: Matrix, b: Matrix) -> bool:
    _check_compatible(a, b)
    first = rref(a)
    second = rref(b)
    return first.rank == second.rank and np.array_equal(
        first.matrix.data[: first.rank], second.matrix.data[: second.rank]
    )


def dump_matrix(matrix: Matrix, stream: TextIO) -> None:
    """Write `rows cols q` followed by one line per row."""
    stream.write(f"{matrix.rows} {matrix.cols} {matrix.field.q}\n")
    for row in matrix.data:
        stream.write(" ".join(str(int(x)) for x in row) + "\n")


def dumps_matrix(matrix: Matrix) -> str:
    buffer = io.StringIO()
    dump_matrix(matrix, buffer)
    return buffer.getvalue()


def loads_matrix(text: str, field: Field | None = None) -> Matrix:
    """Parse the `rows cols q` serialization; the default field of order q is used."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise FormatError("empty matrix file")
    try:
        rows, cols, q = (int(x) for x in lines[0].split())
        body = [[int(x) for x in line.split()] for line in lines[1:]]
    except ValueError as e:
        raise FormatError(f"malformed matrix file: {e}") from e
    if field is None:
        field = field_from_order(q)
    elif field.q != q:
        raise FormatError(f"matrix declares q={q} but field is {field!r}")
    if len(body) != rows or any(len(r) != cols for r in body):
        raise FormatError(f"matrix body does not match header {rows}x{cols}")
    data = np.asarray(body, dtype=DTYPE).reshape(rows, cols)
    if data.size and (data.min() < 0 or data.max() >= q):
        raise FormatError(f"matrix entries outside [0, {q})")
    return Matrix(field, data)
