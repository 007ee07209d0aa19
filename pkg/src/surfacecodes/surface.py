"""Surfaces in P^2 / P^3: presets, rational points and lines, charts, file format."""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum
from functools import cached_property
from pathlib import Path
from typing import Any

import numpy as np

from surfacecodes.exceptions import (
    ChartError,
    FormatError,
    GeometryError,
    NotFoundError,
    NotOnSurfaceError,
    SingularPointError,
    SurfaceValidationError,
)
from surfacecodes.gf import DTYPE, MAX_ORDER, Field, default_modulus, field_new, parse_field_header
from surfacecodes.linalg import combine_rows
from surfacecodes.projspace import (
    HomogeneousPoly,
    ProjectiveLine,
    ProjectivePoint,
    iter_point_chunks,
    line_point_indices,
    make_line,
    monomial_exponents,
    point_array,
)

logger = logging.getLogger(__name__)

DEFAULT_SEARCH_BUDGET = 20_000


class SurfaceKind(StrEnum):
    PROJECTIVE_PLANE = "projective-plane"
    HYPERBOLIC_QUADRIC = "hyperbolic-quadric"
    ELLIPTIC_QUADRIC = "elliptic-quadric"
    CUBIC_WITH_LINES = "cubic-with-lines"
    CUBIC_NO_LINES = "cubic-no-lines"
    CUSTOM = "custom"

    @property
    def is_quadric(self) -> bool:
        return self in (SurfaceKind.HYPERBOLIC_QUADRIC, SurfaceKind.ELLIPTIC_QUADRIC)

    @property
    def is_cubic(self) -> bool:
        return self in (SurfaceKind.CUBIC_WITH_LINES, SurfaceKind.CUBIC_NO_LINES)


class Surface:
    """A surface {F = 0} in P^3, or P^2 itself (r = 2, no equation).

    Point and line data are computed on first access and cached; the object is
    otherwise immutable.
    """

    def __init__(
        self,
        field: Field,
        r: int,
        equation: HomogeneousPoly | None = None,
        kind: SurfaceKind = SurfaceKind.CUSTOM,
        chart_hint: tuple[int, ...] | None = None,
    ) -> None:
        if r == 2:
            if equation is not None:
                raise GeometryError("a surface in P^2 is the plane itself and takes no equation")
        elif r == 3:
            if equation is None or equation.is_zero:
                raise GeometryError("a surface in P^3 needs a nonzero equation")
            if equation.nvars != 4 or equation.field != field:
                raise GeometryError("equation must be a form in X0..X3 over the surface field")
        else:
            raise GeometryError(f"only P^2 and P^3 are supported, got P^{r}")
        if chart_hint is not None and len(chart_hint) != r + 1:
            raise ChartError(f"chart form needs {r + 1} coefficients, got {len(chart_hint)}")
        self.field = field
        self.r = r
        self.equation = equation
        self.kind = SurfaceKind(kind)
        self.chart_hint = tuple(int(c) for c in chart_hint) if chart_hint is not None else None

    def __repr__(self) -> str:
        return f"Surface({self.kind.value}, {self.field!r}, {self.equation})"

    @property
    def degree(self) -> int:
        return self.equation.degree if self.equation is not None else 1

    @cached_property
    def on_surface(self) -> np.ndarray:
        """Boolean mask over the points of the ambient space."""
        ambient = point_array(self.r, self.field)
        if self.equation is None:
            mask = np.ones(len(ambient), dtype=bool)
        else:
            mask = self.equation.evaluate(ambient) == 0
        mask.flags.writeable = False
        return mask

    @cached_property
    def point_indices(self) -> np.ndarray:
        return np.flatnonzero(self.on_surface)

    @cached_property
    def point_array(self) -> np.ndarray:
        points = point_array(self.r, self.field)[self.point_indices]
        points.flags.writeable = False
        return points

    @property
    def num_points(self) -> int:
        return len(self.point_indices)

    @cached_property
    def line_ids(self) -> np.ndarray:
        """Ids (see `projspace.make_line`) of the rational lines inside the surface."""
        if self.r != 3:
            raise GeometryError("line detection needs a surface in P^3")
        members = line_point_indices(self.field)
        ids = np.flatnonzero(self.on_surface[members].all(axis=1))
        logger.debug("%r contains %d rational lines", self, len(ids))
        return ids

    def lines(self) -> list[ProjectiveLine]:
        return [make_line(self.field, int(i)) for i in self.line_ids]

    def contains(self, point: ProjectivePoint | np.ndarray) -> bool:
        coords = np.asarray(point.coords if isinstance(point, ProjectivePoint) else point)
        if coords.shape[-1] != self.r + 1:
            raise GeometryError(f"point {coords} does not live in P^{self.r}")
        if self.equation is None:
            return True
        return bool(self.equation.evaluate(coords)[0] == 0)

    def validate(self) -> None:
        """Check the kind-specific point and line counts; raises SurfaceValidationError."""
        q = self.field.q
        kind = self.kind
        expected_degree = {
            SurfaceKind.HYPERBOLIC_QUADRIC: 2,
            SurfaceKind.ELLIPTIC_QUADRIC: 2,
            SurfaceKind.CUBIC_WITH_LINES: 3,
            SurfaceKind.CUBIC_NO_LINES: 3,
        }.get(kind)
        if kind is SurfaceKind.PROJECTIVE_PLANE:
            if self.r != 2:
                raise SurfaceValidationError("the projective plane preset lives in P^2")
            return
        if kind is not SurfaceKind.CUSTOM and self.r != 3:
            raise SurfaceValidationError(f"{kind.value} must be a surface in P^3")
        if expected_degree is not None and self.degree != expected_degree:
            raise SurfaceValidationError(f"{kind.value} needs degree {expected_degree}")

        counts = {
            SurfaceKind.HYPERBOLIC_QUADRIC: ((q + 1) ** 2, 2 * (q + 1)),
            SurfaceKind.ELLIPTIC_QUADRIC: (q * q + 1, 0),
            SurfaceKind.CUBIC_NO_LINES: (q * q + 2 * q + 1, 0),
        }
        if kind in counts:
            points, lines = counts[kind]
            if self.num_points != points:
                raise SurfaceValidationError(
                    f"{kind.value} over GF({q}) must have {points} points, found {self.num_points}"
                )
            if len(self.line_ids) != lines:
                raise SurfaceValidationError(
                    f"{kind.value} over GF({q}) must contain {lines} rational lines, "
                    f"found {len(self.line_ids)}"
                )
        elif kind is SurfaceKind.CUBIC_WITH_LINES and len(self.line_ids) == 0:
            raise SurfaceValidationError("cubic-with-lines surface contains no rational line")


def surface_points(surface: Surface) -> list[ProjectivePoint]:
    return [ProjectivePoint(tuple(int(c) for c in row)) for row in surface.point_array]


def lines_on_surface(surface: Surface) -> list[ProjectiveLine]:
    return surface.lines()


def _as_coords(point: ProjectivePoint | np.ndarray | tuple[int, ...]) -> np.ndarray:
    if isinstance(point, ProjectivePoint):
        return np.asarray(point.coords, dtype=DTYPE)
    return np.asarray(point, dtype=DTYPE)


def tangent_plane_section(
    surface: Surface, point: ProjectivePoint | np.ndarray | tuple[int, ...]
) -> HomogeneousPoly:
    """The linear form sum_i dF/dX_i(P) X_i of the tangent plane at P."""
    if surface.equation is None:
        raise GeometryError("the projective plane has no tangent plane section; pick a line")
    coords = _as_coords(point)
    if not surface.contains(coords):
        raise NotOnSurfaceError(f"{tuple(int(c) for c in coords)} is not on {surface!r}")
    grad = [int(g.evaluate(coords)[0]) for g in surface.equation.gradient()]
    if not any(grad):
        raise SingularPointError(f"{tuple(int(c) for c in coords)} is a singular point")
    return HomogeneousPoly.linear_form(surface.field, grad)


def _form_values(surface: Surface, form: HomogeneousPoly) -> np.ndarray:
    if form.degree != 1 or form.nvars != surface.r + 1:
        raise ChartError(f"chart needs a linear form in {surface.r + 1} variables")
    if form.is_zero:
        raise ChartError("the zero form does not define a hyperplane")
    return form.evaluate(surface.point_array)


def affine_chart_array(surface: Surface, form: HomogeneousPoly) -> np.ndarray:
    """Surface points off the hyperplane {form = 0}, canonical order."""
    return surface.point_array[_form_values(surface, form) != 0]


def affine_chart(surface: Surface, form: HomogeneousPoly) -> list[ProjectivePoint]:
    chart = affine_chart_array(surface, form)
    return [ProjectivePoint(tuple(int(c) for c in row)) for row in chart]


def plane_section_points(surface: Surface, form: HomogeneousPoly) -> np.ndarray:
    return surface.point_array[_form_values(surface, form) == 0]


def empty_planes(surface: Surface) -> np.ndarray:
    """Coefficient rows of the planes that meet no rational point of the surface."""
    planes = point_array(3, surface.field)
    products = combine_rows(surface.field, planes, surface.point_array.T)
    return planes[(products != 0).all(axis=1)]


@dataclass
class SmoothnessReport:
    """Outcome of the bounded search for singular points."""

    passed: bool
    degrees_checked: tuple[int, ...]
    witness: tuple[int, ...] | None = None
    ext_degree: int | None = None
    partial: bool = True

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "degrees_checked": list(self.degrees_checked),
            "witness": list(self.witness) if self.witness is not None else None,
            "ext_degree": self.ext_degree,
            "partial": self.partial,
        }


def smoothness_check(surface: Surface, max_ext_degree: int = 2) -> SmoothnessReport:
    """Look for common zeros of F and its partials over GF(q^k), k <= max_ext_degree.

    Passing is not a proof of smoothness: singular points defined only over
    larger extensions are missed, hence the report is always marked partial.
    Extensions above the supported field order are skipped.
    """
    if surface.r != 3 or surface.equation is None:
        raise GeometryError("smoothness check needs a surface in P^3")
    base = surface.field
    checked: list[int] = []
    for k in range(1, max_ext_degree + 1):
        if base.p ** (base.e * k) > MAX_ORDER:
            logger.warning("Skipping smoothness check over GF(%d^%d)", base.p, base.e * k)
            break
        ext = field_new(base.p, base.e * k) if k > 1 else base
        forms = [surface.equation.over(ext)] + [g.over(ext) for g in surface.equation.gradient()]
        for chunk in iter_point_chunks(3, ext):
            mask = np.ones(len(chunk), dtype=bool)
            for form in forms:
                mask &= form.evaluate(chunk) == 0
                if not mask.any():
                    break
            hits = np.flatnonzero(mask)
            if hits.size:
                witness = tuple(int(c) for c in chunk[hits[0]])
                logger.debug("Singular point %s over GF(%d)", witness, ext.q)
                return SmoothnessReport(False, (*checked, k), witness, k)
        checked.append(k)
    return SmoothnessReport(True, tuple(checked))


@dataclass
class CubicSearchResult:
    surface: Surface
    empty_plane: tuple[int, ...] | None
    attempts: int
    stats: dict[str, int] = field(default_factory=dict)


def find_cubic_no_lines(
    field: Field,
    budget: int = DEFAULT_SEARCH_BUDGET,
    seed: int = 0,
    require_empty_section: bool = True,
) -> CubicSearchResult:
    """Seeded search for a smooth cubic with q^2+2q+1 points and no rational line.

    With `require_empty_section` the surface must also admit a plane meeting
    none of its rational points; that plane becomes the surface's chart.
    """
    q = field.q
    if q < 4:
        raise NotFoundError(f"cubic search is not supported over GF({q})")
    target = q * q + 2 * q + 1
    exponents = monomial_exponents(4, 3)
    rng = np.random.default_rng(seed)
    stats: Counter[str] = Counter()
    for attempt in range(1, budget + 1):
        coeffs = rng.integers(0, q, size=len(exponents))
        if not coeffs.any():
            stats["zero"] += 1
            continue
        equation = HomogeneousPoly.from_terms(field, 4, 3, list(zip(exponents, coeffs.tolist())))
        candidate = Surface(field, 3, equation, SurfaceKind.CUBIC_NO_LINES)
        if candidate.num_points != target:
            stats["point_count"] += 1
            continue
        if len(candidate.line_ids):
            stats["lines"] += 1
            continue
        plane = None
        if require_empty_section:
            planes = empty_planes(candidate)
            if not len(planes):
                stats["no_empty_plane"] += 1
                continue
            plane = tuple(int(c) for c in planes[0])
        if not smoothness_check(candidate, 2).passed:
            stats["singular"] += 1
            continue
        logger.info("Found cubic without lines after %d attempts: %s", attempt, equation)
        surface = Surface(field, 3, equation, SurfaceKind.CUBIC_NO_LINES, chart_hint=plane)
        return CubicSearchResult(surface, plane, attempt, dict(stats))
    logger.debug("Cubic search rejections: %s", dict(stats))
    raise NotFoundError(f"no cubic without lines over GF({q}) within {budget} attempts")


# Presets


def projective_plane(field: Field) -> Surface:
    return Surface(field, 2, None, SurfaceKind.PROJECTIVE_PLANE)


def hyperbolic_quadric(field: Field) -> Surface:
    """X0*X3 - X1*X2."""
    minus_one = int(field.neg(1))
    equation = HomogeneousPoly.from_terms(
        field, 4, 2, [((1, 0, 0, 1), 1), ((0, 1, 1, 0), minus_one)]
    )
    return Surface(field, 3, equation, SurfaceKind.HYPERBOLIC_QUADRIC)


def irreducible_binary_quadratic(field: Field) -> tuple[int, int]:
    """Least (b, c) such that t^2 + b t + c has no root in the field."""
    t = field.elements()
    squares = field.mul(t, t)
    for b in range(field.q):
        linear = field.add(squares, field.mul(b, t))
        for c in range(1, field.q):
            if (field.add(linear, c) != 0).all():
                return b, c
    raise GeometryError(f"no irreducible quadratic over {field!r}")


def elliptic_quadric(field: Field) -> Surface:
    """X0*X1 - (X2^2 + b X2 X3 + c X3^2) with t^2 + b t + c irreducible."""
    b, c = irreducible_binary_quadratic(field)
    terms = [
        ((1, 1, 0, 0), 1),
        ((0, 0, 2, 0), int(field.neg(1))),
        ((0, 0, 1, 1), int(field.neg(b))),
        ((0, 0, 0, 2), int(field.neg(c))),
    ]
    equation = HomogeneousPoly.from_terms(field, 4, 2, terms)
    return Surface(field, 3, equation, SurfaceKind.ELLIPTIC_QUADRIC)


def fermat_cubic(field: Field) -> Surface:
    """X0^3 + X1^3 + X2^3 + X3^3; smooth when p != 3 and contains X0+X1 = X2+X3 = 0."""
    if field.p == 3:
        raise GeometryError("the Fermat cubic is singular in characteristic 3")
    terms = [(tuple(3 * int(i == j) for j in range(4)), 1) for i in range(4)]
    equation = HomogeneousPoly.from_terms(field, 4, 3, terms)
    return Surface(field, 3, equation, SurfaceKind.CUBIC_WITH_LINES)


def cubic_with_lines(field: Field, seed: int = 0, budget: int = 200) -> Surface:
    """Fermat cubic, or in characteristic 3 a seeded X0*A + X1*B through the line X0=X1=0."""
    if field.p != 3:
        return fermat_cubic(field)
    quadrics = monomial_exponents(4, 2)
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        a, b = rng.integers(0, field.q, size=(2, len(quadrics)))
        terms = [((e[0] + 1, *e[1:]), int(c)) for e, c in zip(quadrics, a)]
        terms += [((e[0], e[1] + 1, *e[2:]), int(c)) for e, c in zip(quadrics, b)]
        equation = HomogeneousPoly.from_terms(field, 4, 3, terms)
        if equation.is_zero:
            continue
        candidate = Surface(field, 3, equation, SurfaceKind.CUBIC_WITH_LINES)
        if smoothness_check(candidate, 2).passed:
            return candidate
    raise NotFoundError(f"no smooth cubic through a line over {field!r} within {budget} tries")


def _cubic_no_lines_preset(field: Field, seed: int = 0, budget: int = DEFAULT_SEARCH_BUDGET):
    return find_cubic_no_lines(field, budget=budget, seed=seed).surface


@dataclass
class PresetMeta:
    """Metadata about a surface preset."""

    description: str
    kind: SurfaceKind
    factory: Callable[..., Surface]
    searched: bool = False


PRESETS: dict[str, PresetMeta] = {
    "p2": PresetMeta(
        description="Projective plane; affine chart gives Reed-Muller type codes",
        kind=SurfaceKind.PROJECTIVE_PLANE,
        factory=projective_plane,
    ),
    "hyperbolic-quadric": PresetMeta(
        description="X0*X3 - X1*X2, two rulings of rational lines",
        kind=SurfaceKind.HYPERBOLIC_QUADRIC,
        factory=hyperbolic_quadric,
    ),
    "elliptic-quadric": PresetMeta(
        description="X0*X1 - phi(X2,X3) with phi irreducible, no rational lines",
        kind=SurfaceKind.ELLIPTIC_QUADRIC,
        factory=elliptic_quadric,
    ),
    "cubic-with-lines": PresetMeta(
        description="Smooth cubic containing rational lines (Fermat cubic when p != 3)",
        kind=SurfaceKind.CUBIC_WITH_LINES,
        factory=cubic_with_lines,
        searched=True,
    ),
    "cubic-no-lines": PresetMeta(
        description="Seeded search for a smooth cubic with no rational lines",
        kind=SurfaceKind.CUBIC_NO_LINES,
        factory=_cubic_no_lines_preset,
        searched=True,
    ),
}


def build_preset(name: str, field: Field, seed: int = 0) -> Surface:
    if name not in PRESETS:
        raise GeometryError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    meta = PRESETS[name]
    if meta.searched:
        return meta.factory(field, seed=seed)
    return meta.factory(field)


# Surface description files


def dumps_surface(surface: Surface) -> str:
    """Canonical text form; `loads_surface` of the result rebuilds the same surface."""
    f = surface.field
    lines = [f.header(), f"vars={surface.r + 1}"]
    if f.e > 1 and f.modulus != default_modulus(f.p, f.e):
        lines.append("modulus=" + ",".join(str(c) for c in f.modulus))
    if surface.kind is not SurfaceKind.CUSTOM:
        lines.append(f"kind={surface.kind.value}")
    if surface.chart_hint is not None:
        lines.append("chart=" + ",".join(str(c) for c in surface.chart_hint))
    if surface.equation is not None:
        for exps, coeff in surface.equation.terms:
            lines.append(" ".join(str(x) for x in (coeff, *exps)))
    return "\n".join(lines) + "\n"


def _int_list(key: str, value: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in value.split(","))
    except ValueError as e:
        raise FormatError(f"malformed {key}= header: {value!r}") from e


def loads_surface(text: str) -> Surface:
    headers: dict[str, str] = {}
    monomials: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" in line:
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in ("q", "vars", "modulus", "kind", "chart"):
                raise FormatError(f"line {lineno}: unknown header {key!r}")
            if key in headers:
                raise FormatError(f"line {lineno}: duplicate header {key!r}")
            headers[key] = value.strip()
            continue
        try:
            monomials.append([int(x) for x in line.split()])
        except ValueError as e:
            raise FormatError(f"line {lineno}: expected integers, got {line!r}") from e

    for required in ("q", "vars"):
        if required not in headers:
            raise FormatError(f"missing {required}= header")
    modulus = list(_int_list("modulus", headers["modulus"])) if "modulus" in headers else None
    field = parse_field_header(f"q={headers['q']}", modulus)
    try:
        nvars = int(headers["vars"])
    except ValueError as e:
        raise FormatError(f"malformed vars= header: {headers['vars']!r}") from e
    if nvars not in (3, 4):
        raise FormatError(f"vars must be 3 or 4, got {nvars}")
    try:
        kind = SurfaceKind(headers.get("kind", SurfaceKind.CUSTOM.value))
    except ValueError as e:
        raise FormatError(f"unknown surface kind {headers['kind']!r}") from e
    chart = _int_list("chart", headers["chart"]) if "chart" in headers else None

    if nvars == 3:
        if monomials:
            raise FormatError("a P^2 description (vars=3) takes no equation")
        return Surface(field, 2, None, kind, chart_hint=chart)
    if not monomials:
        raise FormatError("vars=4 needs at least one monomial line")
    if any(len(m) != nvars + 1 for m in monomials):
        raise FormatError(f"monomial lines need a coefficient and {nvars} exponents")
    degree = sum(monomials[0][1:])
    if any(sum(m[1:]) != degree for m in monomials):
        raise FormatError("monomials of mixed degree")
    if degree < 1:
        raise FormatError("the equation must have degree at least 1")
    equation = HomogeneousPoly.from_terms(field, nvars, degree, [(m[1:], m[0]) for m in monomials])
    return Surface(field, 3, equation, kind, chart_hint=chart)


def read_surface(path: Path) -> Surface:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise FormatError(f"cannot read surface file {path}: {e}") from e
    return loads_surface(text)


def write_surface(surface: Surface, path: Path) -> None:
    Path(path).write_text(dumps_surface(surface))

