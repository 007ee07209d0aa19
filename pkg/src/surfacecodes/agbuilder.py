"""Functional codes: evaluate degree-m forms at the affine chart of a surface."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from surfacecodes.code import LinearCode
from surfacecodes.exceptions import (
    ChartError,
    DimensionMismatchError,
    OutOfRangeError,
    WitnessError,
)
from surfacecodes.gf import DTYPE, Field
from surfacecodes.linalg import Matrix, combine_rows, nullspace
from surfacecodes.projspace import (
    HomogeneousPoly,
    canonicalize,
    line_point_indices,
    monomial_exponents,
    point_array,
    point_index,
)
from surfacecodes.surface import (
    Surface,
    SurfaceKind,
    affine_chart_array,
    empty_planes,
    projective_plane,
    tangent_plane_section,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChartChoice:
    """The hyperplane section H_S removed from the surface."""

    form: HomogeneousPoly
    tangent_point: tuple[int, ...] | None = None
    source: str = "explicit"

    def describe(self) -> str:
        coeffs = ",".join(str(int(c)) for c in self.form.coefficients())
        if self.tangent_point is not None:
            point = ":".join(str(c) for c in self.tangent_point)
            return f"tangent plane at ({point}) [{coeffs}]"
        return f"{self.source} [{coeffs}]"


def resolve_chart(
    surface: Surface,
    chart_point: int | None = None,
    chart_plane: tuple[int, ...] | None = None,
) -> ChartChoice:
    """Pick H_S: an explicit form, the tangent plane at a surface point, or the kind default.

    Defaults: X0 = 0 on P^2; the recorded (or first) empty plane for cubics
    without lines; otherwise the tangent plane at the first surface point.
    """
    field = surface.field
    if chart_plane is not None:
        if len(chart_plane) != surface.r + 1:
            raise ChartError(f"chart plane needs {surface.r + 1} coefficients")
        if any(not 0 <= c < field.q for c in chart_plane) or not any(chart_plane):
            raise ChartError(
                f"chart plane {tuple(chart_plane)} is not a nonzero form over {field!r}"
            )
        return ChartChoice(HomogeneousPoly.linear_form(field, list(chart_plane)))
    if surface.r == 2:
        if chart_point is not None:
            raise ChartError("the projective plane takes a chart line, not a tangent point")
        return ChartChoice(HomogeneousPoly.linear_form(field, [1, 0, 0]), source="line X0=0")
    if chart_point is None:
        if surface.chart_hint is not None:
            form = HomogeneousPoly.linear_form(field, list(surface.chart_hint))
            return ChartChoice(form, source="recorded plane")
        if surface.kind is SurfaceKind.CUBIC_NO_LINES:
            planes = empty_planes(surface)
            if not len(planes):
                raise ChartError("no plane avoids every rational point of the cubic")
            form = HomogeneousPoly.linear_form(field, planes[0].tolist())
            return ChartChoice(form, source="empty plane")
        chart_point = 0
    if not 0 <= chart_point < surface.num_points:
        raise ChartError(f"chart point {chart_point} out of range [0, {surface.num_points})")
    point = tuple(int(c) for c in surface.point_array[chart_point])
    return ChartChoice(tangent_plane_section(surface, point), tangent_point=point, source="tangent")


def monomial_basis(r: int, m: int, field: Field) -> list[HomogeneousPoly]:
    """All C(m+r, r) monomials of degree m in X0..Xr, graded lexicographic (X0^m first)."""
    if m < 0:
        raise OutOfRangeError(f"degree must be non-negative, got {m}")
    return [HomogeneousPoly.monomial(field, exps) for exps in monomial_exponents(r + 1, m)]


def expected_dimension(kind: SurfaceKind, q: int, m: int) -> int | None:
    """Closed-form dimension of the evaluation code, where one is known."""
    if kind is SurfaceKind.PROJECTIVE_PLANE:
        return sum(1 for i in range(q) for j in range(q) if i + j <= m)
    if m > q - 2:
        return None
    if kind.is_quadric:
        return (m + 1) ** 2
    if kind.is_cubic:
        return (3 * m * m + 3 * m + 2) // 2
    return None


def degree_range(kind: SurfaceKind, q: int) -> tuple[int, int] | None:
    if kind is SurfaceKind.PROJECTIVE_PLANE:
        return 0, 2 * q - 3
    if kind.is_quadric or kind.is_cubic:
        return 0, q - 2
    return None


@dataclass(frozen=True, eq=False)
class EvaluationCodeSpec:
    """C_L(S, Delta, m H_S): Delta is the chart, each point scaled so the chart form is 1."""

    surface: Surface
    m: int
    chart: ChartChoice
    points: np.ndarray
    check_dimension: bool = True

    @classmethod
    def create(
        cls,
        surface: Surface,
        m: int,
        chart: ChartChoice | None = None,
        check_dimension: bool = True,
        strict_range: bool = True,
    ) -> EvaluationCodeSpec:
        q = surface.field.q
        if m < 0:
            raise OutOfRangeError(f"m must be non-negative, got {m}")
        bounds = degree_range(surface.kind, q)
        if strict_range and bounds is not None and not bounds[0] <= m <= bounds[1]:
            raise OutOfRangeError(
                f"m={m} outside [{bounds[0]}, {bounds[1]}] for {surface.kind.value} over GF({q})"
            )
        chart = chart or resolve_chart(surface)
        field = surface.field
        points = affine_chart_array(surface, chart.form)
        if not len(points):
            raise ChartError("the chart contains no rational point")
        scale = field.inv(chart.form.evaluate(points))
        normalised = field.mul(scale[:, None], points)
        normalised.flags.writeable = False
        return cls(surface, m, chart, normalised, check_dimension)

    @property
    def field(self) -> Field:
        return self.surface.field

    @property
    def n(self) -> int:
        return len(self.points)

    def canonical_indices(self) -> np.ndarray:
        """Index in the ambient point enumeration of each Delta point."""
        return point_index(canonicalize(self.field, self.points), self.field.q)


def evaluation_matrix(spec: EvaluationCodeSpec) -> np.ndarray:
    """Rows: monomials of degree m; columns: points of Delta."""
    field = spec.field
    pts = spec.points
    nvars = pts.shape[1]
    powers = [
        np.stack([field.power(pts[:, var], e) for e in range(spec.m + 1)]) for var in range(nvars)
    ]
    exps = monomial_exponents(nvars, spec.m)
    rows = np.empty((len(exps), spec.n), dtype=DTYPE)
    for i, mono in enumerate(exps):
        value = powers[0][mono[0]]
        for var in range(1, nvars):
            value = field.mul(value, powers[var][mono[var]])
        rows[i] = value
    return rows


def build_functional_code(spec: EvaluationCodeSpec) -> LinearCode:
    """Row space of the evaluation matrix; fails loudly when the dimension is off."""
    code = LinearCode.from_generator(Matrix(spec.field, evaluation_matrix(spec)))
    expected = expected_dimension(spec.surface.kind, spec.field.q, spec.m)
    logger.debug("Built %r for %s m=%d", code, spec.surface.kind.value, spec.m)
    if spec.check_dimension and expected is not None and code.k != expected:
        raise DimensionMismatchError(
            f"{spec.surface.kind.value} m={spec.m}: evaluation rank {code.k}, expected {expected}"
        )
    return code


def rm_spec(field: Field, m: int) -> EvaluationCodeSpec:
    if not 0 <= m <= 2 * field.q - 3:
        raise OutOfRangeError(f"Reed-Muller degree must lie in [0, {2 * field.q - 3}], got {m}")
    return EvaluationCodeSpec.create(projective_plane(field), m)


def rm_code(field: Field, m: int) -> LinearCode:
    """Degree-<=m bivariate evaluation code on the q^2 points of the affine plane."""
    return build_functional_code(rm_spec(field, m))


def _check_dual_word(spec: EvaluationCodeSpec, word: np.ndarray) -> None:
    products = combine_rows(spec.field, word, evaluation_matrix(spec).T)
    if products.any():
        raise WitnessError("constructed word is not orthogonal to the code")


def chart_positions_on_line(spec: EvaluationCodeSpec, members: np.ndarray) -> np.ndarray:
    """Positions in Delta of the points whose ambient indices are `members`."""
    return np.flatnonzero(np.isin(spec.canonical_indices(), members))


def collinear_dual_word(spec: EvaluationCodeSpec, positions: np.ndarray) -> np.ndarray:
    """Weight m+2 dual word on m+2 collinear chart points.

    With P_i = A + t_i (B - A) on the line, the coefficients
    prod_{j != i} (t_i - t_j)^-1 annihilate every polynomial of degree <= m in t.
    """
    field = spec.field
    need = spec.m + 2
    if len(positions) < need:
        raise WitnessError(f"line carries {len(positions)} chart points, need {need}")
    chosen = np.asarray(positions[:need])
    pts = spec.points[chosen]
    direction = field.sub(pts[1], pts[0])
    axis = int(np.flatnonzero(direction)[0])
    t = field.div(field.sub(pts[:, axis], pts[0, axis]), direction[axis])
    word = np.zeros(spec.n, dtype=DTYPE)
    for i in range(need):
        denominator = 1
        for j in range(need):
            if j != i:
                denominator = field.mul(denominator, field.sub(t[i], t[j]))
        word[chosen[i]] = field.inv(denominator)
    _check_dual_word(spec, word)
    return word


def line_dual_witness(spec: EvaluationCodeSpec, line: int | None = None) -> np.ndarray:
    """Dual codeword of weight m+2 supported on a rational line of the surface.

    `line` is a line id as in `projspace.make_line`; by default the first
    line of the surface with enough chart points is used.
    """
    surface = spec.surface
    if surface.r != 3:
        raise WitnessError("surface line witnesses need a surface in P^3")
    members = line_point_indices(spec.field)
    candidates = [line] if line is not None else [int(i) for i in surface.line_ids]
    if line is not None and line not in set(surface.line_ids.tolist()):
        raise WitnessError(f"line {line} does not lie on the surface")
    for line_id in candidates:
        positions = chart_positions_on_line(spec, members[line_id])
        if len(positions) >= spec.m + 2:
            return collinear_dual_word(spec, positions)
    raise WitnessError(f"no rational line of the surface carries {spec.m + 2} chart points")


def section_dual_witness(
    spec: EvaluationCodeSpec, plane: tuple[int, ...] | None = None
) -> np.ndarray:
    """Lightest nullspace basis word of the evaluation matrix cut to one plane section.

    The section defaults to the plane carrying the most chart points. A curve
    whose points impose r conditions on degree-m forms gives words of weight
    at most r+1; on a conic of a quadric that is 2m+2.
    """
    field = spec.field
    if spec.surface.r != 3:
        raise WitnessError("plane section witnesses need a surface in P^3")
    if plane is None:
        planes = point_array(3, field)
        counts = (combine_rows(field, planes, spec.points.T) == 0).sum(axis=1)
        plane = tuple(int(c) for c in planes[int(np.argmax(counts))])
    form = HomogeneousPoly.linear_form(field, list(plane))
    positions = np.flatnonzero(form.evaluate(spec.points) == 0)
    restricted = Matrix(field, evaluation_matrix(spec)[:, positions])
    basis = nullspace(restricted).data
    if not len(basis):
        raise WitnessError(
            f"the {len(positions)} chart points on plane {plane} impose independent conditions"
        )
    lightest = basis[int(np.argmin(np.count_nonzero(basis, axis=1)))]
    word = np.zeros(spec.n, dtype=DTYPE)
    word[positions] = lightest
    _check_dual_word(spec, word)
    logger.debug("Section witness of weight %d on plane %s", np.count_nonzero(word), plane)
    return word


def rm_dual_witness(field: Field, m: int) -> np.ndarray:
    """Dual codeword of minimum weight for the Reed-Muller code of degree m.

    m <= q-3: m+2 points on the line X2 = 0. Otherwise the evaluation of
    prod_{i<t} (X1 - a_i X0), t = 2q-3-m, which lies in the dual code
    C_L((2q-3-m)H) and has weight q(m+3-q).
    """
    spec = rm_spec(field, m)
    q = field.q
    if m <= q - 3:
        positions = np.flatnonzero(spec.points[:, 2] == 0)
        return collinear_dual_word(spec, positions)
    t = 2 * q - 3 - m
    x0, x1 = spec.points[:, 0], spec.points[:, 1]
    word = np.ones(spec.n, dtype=DTYPE)
    for a in range(t):
        word = field.mul(word, field.sub(x1, field.mul(a, x0)))
    _check_dual_word(spec, word)
    return word
