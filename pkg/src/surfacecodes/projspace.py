"""Projective spaces over finite fields: points, lines, homogeneous forms."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from surfacecodes.exceptions import FieldError, GeometryError
from surfacecodes.gf import DTYPE, Field

logger = logging.getLogger(__name__)

CHUNK_ROWS = 1 << 16


def all_vectors(q: int, length: int) -> np.ndarray:
    """Every vector of `length` digits in [0, q), lexicographic, first digit slowest."""
    if length == 0:
        return np.zeros((1, 0), dtype=DTYPE)
    grid = np.indices((q,) * length, dtype=DTYPE)
    return grid.reshape(length, -1).T.copy()


def canonicalize(field: Field, coords: np.ndarray) -> np.ndarray:
    """Scale each row so its first nonzero coordinate is 1."""
    coords = np.atleast_2d(np.asarray(coords, dtype=DTYPE))
    nonzero = coords != 0
    if not nonzero.any(axis=1).all():
        raise GeometryError("the zero vector is not a projective point")
    lead = nonzero.argmax(axis=1)
    scale = field.inv(coords[np.arange(len(coords)), lead])
    return field.mul(scale[:, None], coords)


@dataclass(frozen=True)
class ProjectivePoint:
    """A rational point in canonical form (first nonzero coordinate is 1)."""

    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        lead = next((c for c in self.coords if c != 0), None)
        if lead is None:
            raise GeometryError("the zero vector is not a projective point")
        if lead != 1:
            raise GeometryError(f"{self.coords} is not in canonical form")

    @classmethod
    def from_coords(cls, field: Field, coords: Sequence[int]) -> ProjectivePoint:
        return cls(tuple(int(c) for c in canonicalize(field, np.asarray(coords))[0]))

    @property
    def dimension(self) -> int:
        return len(self.coords) - 1

    def __str__(self) -> str:
        return "(" + ":".join(str(c) for c in self.coords) + ")"


@lru_cache(maxsize=16)
def point_array(r: int, field: Field) -> np.ndarray:
    """All points of P^r(F_q) as canonical rows, in enumeration order.

    Points are grouped by the position of their leading 1; inside a group the
    remaining coordinates run lexicographically.
    """
    q = field.q
    blocks = []
    for lead in range(r + 1):
        rest = all_vectors(q, r - lead)
        block = np.zeros((len(rest), r + 1), dtype=DTYPE)
        block[:, lead] = 1
        block[:, lead + 1 :] = rest
        blocks.append(block)
    points = np.vstack(blocks)
    points.flags.writeable = False
    return points


def monomial_exponents(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of every degree-`degree` monomial, largest first (X0^d leads)."""
    if nvars == 1:
        return [(degree,)]
    out = []
    for head in range(degree, -1, -1):
        out.extend((head, *tail) for tail in monomial_exponents(nvars - 1, degree - head))
    return out


def point_count(r: int, q: int) -> int:
    return (q ** (r + 1) - 1) // (q - 1)


def point_index(points: np.ndarray, q: int) -> np.ndarray:
    """Enumeration index of canonical points (inverse of `point_array`)."""
    points = np.atleast_2d(np.asarray(points, dtype=DTYPE))
    r = points.shape[1] - 1
    place = q ** np.arange(r, -1, -1, dtype=DTYPE)
    offsets = np.concatenate([[0], np.cumsum(place)])[: r + 1]
    lead = (points != 0).argmax(axis=1)
    rest = points @ place - place[lead]
    return offsets[lead] + rest


def enumerate_points(r: int, field: Field) -> list[ProjectivePoint]:
    if r not in (2, 3):
        raise GeometryError(f"only P^2 and P^3 are supported, got P^{r}")
    return [ProjectivePoint(tuple(int(c) for c in row)) for row in point_array(r, field)]


def iter_point_chunks(r: int, field: Field, rows: int = CHUNK_ROWS) -> Iterator[np.ndarray]:
    """Yield the points of P^r in enumeration order, a bounded block at a time."""
    q = field.q
    for lead in range(r + 1):
        tail = r - lead
        split = 0
        while split < tail and q ** (tail - split) > rows:
            split += 1
        rest = all_vectors(q, tail - split)
        for head in all_vectors(q, split):
            block = np.zeros((len(rest), r + 1), dtype=DTYPE)
            block[:, lead] = 1
            block[:, lead + 1 : lead + 1 + split] = head
            block[:, lead + 1 + split :] = rest
            yield block


@dataclass(frozen=True)
class ProjectiveLine:
    """A rational line of P^3 with its q+1 points in canonical sorted order."""

    basis: tuple[ProjectivePoint, ProjectivePoint]
    points: tuple[ProjectivePoint, ...]

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, point: object) -> bool:
        return point in self.points


@lru_cache(maxsize=8)
def line_bases(field: Field) -> np.ndarray:
    """Every line of P^3 as a 2 x 4 basis in reduced row echelon form."""
    q = field.q
    blocks = []
    for i, j in itertools.combinations(range(4), 2):
        free_first = [c for c in range(i + 1, 4) if c != j]
        free_second = list(range(j + 1, 4))
        values = all_vectors(q, len(free_first) + len(free_second))
        block = np.zeros((len(values), 2, 4), dtype=DTYPE)
        block[:, 0, i] = 1
        block[:, 1, j] = 1
        block[:, 0, free_first] = values[:, : len(free_first)]
        block[:, 1, free_second] = values[:, len(free_first) :]
        blocks.append(block)
    bases = np.concatenate(blocks)
    bases.flags.writeable = False
    return bases


@lru_cache(maxsize=8)
def line_point_indices(field: Field) -> np.ndarray:
    """L x (q+1) matrix of point indices, one sorted row per line of P^3."""
    q = field.q
    bases = line_bases(field)
    t = field.elements()
    first = bases[:, None, 0, :]
    second = bases[:, None, 1, :]
    affine = field.add(first, field.mul(t[None, :, None], second))
    points = np.concatenate([affine, bases[:, 1:2, :]], axis=1)
    indices = point_index(points.reshape(-1, 4), q).reshape(len(bases), q + 1)
    indices.sort(axis=1)
    indices.flags.writeable = False
    logger.debug("Indexed %d lines of P^3 over %r", len(bases), field)
    return indices


def line_count(q: int) -> int:
    return (q * q + 1) * (q * q + q + 1)


def make_line(field: Field, line_id: int) -> ProjectiveLine:
    bases = line_bases(field)
    points = point_array(3, field)
    basis = tuple(ProjectivePoint(tuple(int(c) for c in row)) for row in bases[line_id])
    members = tuple(
        ProjectivePoint(tuple(int(c) for c in points[idx]))
        for idx in line_point_indices(field)[line_id]
    )
    return ProjectiveLine(basis=basis, points=members)


def enumerate_lines(field: Field) -> list[ProjectiveLine]:
    return [make_line(field, line_id) for line_id in range(len(line_bases(field)))]


@dataclass(frozen=True)
class HomogeneousPoly:
    """Sparse homogeneous form: sorted (exponents, nonzero coefficient) terms.

    Terms are ordered by exponent vector, largest first, so X0^d leads.
    """

    field: Field
    nvars: int
    degree: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self) -> None:
        previous = None
        for exps, coeff in self.terms:
            if len(exps) != self.nvars or sum(exps) != self.degree or min(exps) < 0:
                raise GeometryError(f"exponents {exps} do not form a degree-{self.degree} monomial")
            if not 0 < coeff < self.field.q:
                raise FieldError(f"coefficient {coeff} is not a nonzero element of {self.field!r}")
            if previous is not None and exps >= previous:
                raise GeometryError("terms must be sorted and free of duplicates")
            previous = exps

    @classmethod
    def from_terms(
        cls,
        field: Field,
        nvars: int,
        degree: int,
        terms: Sequence[tuple[Sequence[int], int]],
    ) -> HomogeneousPoly:
        """Merge duplicate monomials, drop zero coefficients and sort."""
        merged: dict[tuple[int, ...], int] = {}
        for exps, coeff in terms:
            key = tuple(int(x) for x in exps)
            if not 0 <= int(coeff) < field.q:
                raise FieldError(f"coefficient {coeff} is not an element of {field!r}")
            merged[key] = int(field.add(merged.get(key, 0), int(coeff)))
        ordered = tuple(sorted(((k, v) for k, v in merged.items() if v), reverse=True))
        return cls(field, nvars, degree, ordered)

    @classmethod
    def monomial(cls, field: Field, exps: Sequence[int]) -> HomogeneousPoly:
        return cls.from_terms(field, len(exps), sum(exps), [(exps, 1)])

    @classmethod
    def linear_form(cls, field: Field, coeffs: Sequence[int]) -> HomogeneousPoly:
        n = len(coeffs)
        terms = [(tuple(int(i == j) for j in range(n)), c) for i, c in enumerate(coeffs)]
        return cls.from_terms(field, n, 1, terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficients(self) -> np.ndarray:
        """Coefficient vector of a linear form."""
        if self.degree != 1:
            raise GeometryError("coefficients() is defined for linear forms only")
        out = np.zeros(self.nvars, dtype=DTYPE)
        for exps, coeff in self.terms:
            out[exps.index(1)] = coeff
        return out

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at each row of `points`."""
        field = self.field
        pts = np.atleast_2d(np.asarray(points, dtype=DTYPE))
        result = np.zeros(len(pts), dtype=DTYPE)
        powers: dict[tuple[int, int], np.ndarray] = {}
        for exps, coeff in self.terms:
            term = np.full(len(pts), coeff, dtype=DTYPE)
            for var, e in enumerate(exps):
                if e:
                    if (var, e) not in powers:
                        powers[(var, e)] = field.power(pts[:, var], e)
                    term = field.mul(term, powers[(var, e)])
            result = field.add(result, term)
        return result

    def partial(self, var: int) -> HomogeneousPoly:
        """Formal derivative with respect to X_var."""
        terms = []
        for exps, coeff in self.terms:
            e = exps[var]
            multiple = e % self.field.p
            if multiple:
                lowered = list(exps)
                lowered[var] -= 1
                terms.append((lowered, int(self.field.mul(multiple, coeff))))
        return HomogeneousPoly.from_terms(self.field, self.nvars, max(self.degree - 1, 0), terms)

    def gradient(self) -> list[HomogeneousPoly]:
        return [self.partial(var) for var in range(self.nvars)]

    def over(self, ext: Field) -> HomogeneousPoly:
        """The same form with coefficients mapped into an extension field."""
        image = self.field.embedding_into(ext)
        terms = [(exps, int(image[coeff])) for exps, coeff in self.terms]
        return HomogeneousPoly(ext, self.nvars, self.degree, tuple(terms))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in self.terms:
            mono = "*".join(
                f"X{var}" if e == 1 else f"X{var}^{e}" for var, e in enumerate(exps) if e
            )
            if not mono:
                parts.append(str(coeff))
            else:
                parts.append(mono if coeff == 1 else f"{coeff}*{mono}")
        return " + ".join(parts)
