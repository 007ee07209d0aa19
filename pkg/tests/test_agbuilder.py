"""Tests for evaluation codes on surfaces and their constructed dual words."""

from math import comb

import numpy as np
import pytest

from surfacecodes.agbuilder import (
    EvaluationCodeSpec,
    build_functional_code,
    chart_positions_on_line,
    collinear_dual_word,
    degree_range,
    evaluation_matrix,
    expected_dimension,
    line_dual_witness,
    monomial_basis,
    resolve_chart,
    rm_code,
    rm_dual_witness,
    rm_spec,
    section_dual_witness,
)
from surfacecodes.code import min_distance_isd
from surfacecodes.engines.base import Certainty, certify, witness_result
from surfacecodes.exceptions import (
    ChartError,
    DimensionMismatchError,
    OutOfRangeError,
    WitnessError,
)
from surfacecodes.gf import field_from_order
from surfacecodes.linalg import Matrix, row_space_equal
from surfacecodes.projspace import line_point_indices
from surfacecodes.surface import (
    Surface,
    SurfaceKind,
    elliptic_quadric,
    hyperbolic_quadric,
    projective_plane,
)
from surfacecodes.tables import rm_distance


def _rm_cases():
    return [(q, m) for q in (3, 4) for m in range(1, 2 * q - 2)]


class TestDimensions:
    def test_monomial_basis(self, gf4):
        basis = monomial_basis(3, 2, gf4)
        assert len(basis) == comb(5, 3)
        assert basis[0] == monomial_basis(3, 2, gf4)[0]
        with pytest.raises(OutOfRangeError):
            monomial_basis(3, -1, gf4)

    def test_expected_dimension(self):
        plane = SurfaceKind.PROJECTIVE_PLANE
        assert expected_dimension(plane, 4, 0) == 1
        assert expected_dimension(plane, 4, 2) == 6
        assert expected_dimension(plane, 4, 5) == 15
        assert expected_dimension(SurfaceKind.ELLIPTIC_QUADRIC, 8, 3) == 16
        assert expected_dimension(SurfaceKind.CUBIC_NO_LINES, 9, 2) == 10
        assert expected_dimension(SurfaceKind.HYPERBOLIC_QUADRIC, 4, 3) is None
        assert expected_dimension(SurfaceKind.CUSTOM, 4, 1) is None

    def test_degree_range(self):
        assert degree_range(SurfaceKind.PROJECTIVE_PLANE, 4) == (0, 5)
        assert degree_range(SurfaceKind.CUBIC_NO_LINES, 9) == (0, 7)
        assert degree_range(SurfaceKind.CUSTOM, 9) is None

    @pytest.mark.parametrize("q", [3, 4, 5])
    def test_rm_dimension(self, q):
        field = field_from_order(q)
        for m in range(0, 2 * q - 2):
            code = rm_code(field, m)
            assert code.n == q * q
            assert code.k == expected_dimension(SurfaceKind.PROJECTIVE_PLANE, q, m)

    @pytest.mark.parametrize("factory", [hyperbolic_quadric, elliptic_quadric])
    @pytest.mark.parametrize("q,m", [(4, 1), (4, 2), (5, 3), (8, 2)])
    def test_quadric_dimension(self, factory, q, m):
        code = build_functional_code(EvaluationCodeSpec.create(factory(field_from_order(q)), m))
        assert code.n == q * q
        assert code.k == (m + 1) ** 2

    def test_dimension_mismatch_is_loud(self, gf4):
        # a quadric labelled as a cubic: degree-2 forms give 9, not 10
        quadric = hyperbolic_quadric(gf4)
        impostor = Surface(gf4, 3, quadric.equation, SurfaceKind.CUBIC_WITH_LINES)
        with pytest.raises(DimensionMismatchError):
            build_functional_code(EvaluationCodeSpec.create(impostor, 2))
        unchecked = EvaluationCodeSpec.create(impostor, 2, check_dimension=False)
        assert build_functional_code(unchecked).k == 9


class TestEvaluationSpec:
    def test_points_scaled_to_chart(self, gf8):
        spec = EvaluationCodeSpec.create(elliptic_quadric(gf8), 2)
        assert spec.n == 64
        assert np.all(spec.chart.form.evaluate(spec.points) == 1)
        assert all(spec.surface.contains(p) for p in spec.points)

    def test_canonical_indices_are_surface_points(self, gf4):
        spec = EvaluationCodeSpec.create(hyperbolic_quadric(gf4), 1)
        assert np.isin(spec.canonical_indices(), spec.surface.point_indices).all()
        assert len(np.unique(spec.canonical_indices())) == spec.n

    def test_degree_out_of_range(self, gf4):
        with pytest.raises(OutOfRangeError):
            EvaluationCodeSpec.create(hyperbolic_quadric(gf4), 3)
        with pytest.raises(OutOfRangeError):
            EvaluationCodeSpec.create(hyperbolic_quadric(gf4), -1)
        spec = EvaluationCodeSpec.create(hyperbolic_quadric(gf4), 3, strict_range=False)
        assert spec.m == 3
        with pytest.raises(OutOfRangeError):
            rm_spec(gf4, 6)

    def test_evaluation_matrix(self, gf4):
        spec = rm_spec(gf4, 1)
        matrix = evaluation_matrix(spec)
        assert matrix.shape == (3, 16)
        # X0 evaluates to 1 on the chart X0 != 0
        assert np.all(matrix[0] == 1)


class TestCharts:
    def test_plane_default(self, gf4):
        chart = resolve_chart(projective_plane(gf4))
        assert list(chart.form.coefficients()) == [1, 0, 0]
        assert chart.describe() == "line X0=0 [1,0,0]"
        with pytest.raises(ChartError):
            resolve_chart(projective_plane(gf4), chart_point=0)

    def test_tangent_default(self, gf4):
        surface = hyperbolic_quadric(gf4)
        chart = resolve_chart(surface)
        assert chart.tangent_point == tuple(int(c) for c in surface.point_array[0])
        assert chart.describe().startswith("tangent plane at (")

    def test_explicit_plane(self, gf4):
        chart = resolve_chart(elliptic_quadric(gf4), chart_plane=(0, 0, 0, 1))
        assert chart.source == "explicit"

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"chart_plane": (1, 0, 0)},
            {"chart_plane": (0, 0, 0, 0)},
            {"chart_plane": (4, 0, 0, 0)},
            {"chart_point": 25},
            {"chart_point": -1},
        ],
    )
    def test_bad_charts(self, gf4, kwargs):
        with pytest.raises(ChartError):
            resolve_chart(hyperbolic_quadric(gf4), **kwargs)

    def test_recorded_plane(self, gf4):
        quadric = elliptic_quadric(gf4)
        surface = Surface(gf4, 3, quadric.equation, quadric.kind, chart_hint=(1, 0, 0, 0))
        assert resolve_chart(surface).source == "recorded plane"


class TestReedMuller:
    @pytest.mark.parametrize("q,m", _rm_cases())
    def test_dual_distance(self, q, m):
        field = field_from_order(q)
        dual = rm_code(field, m).dual()
        result = min_distance_isd(dual)
        assert result.certainty is Certainty.EXACT
        assert result.value == rm_distance(q, m)

    @pytest.mark.parametrize("q,m", _rm_cases() + [(8, 3), (8, 9)])
    def test_constructed_witness(self, q, m):
        field = field_from_order(q)
        dual = rm_code(field, m).dual()
        word = rm_dual_witness(field, m)
        assert dual.contains(word)
        assert int(np.count_nonzero(word)) == rm_distance(q, m)

    def test_duality(self, gf5):
        # the dual of the degree-m code is the degree 2q-3-m code
        for m in range(0, 8):
            dual = rm_code(gf5, m).dual()
            other = rm_code(gf5, 7 - m)
            assert dual.k == other.k
            assert all(dual.contains(w) for w in other.generator.data)


class TestLineWitness:
    @pytest.mark.parametrize("m", [1, 2])
    def test_hyperbolic_witness_is_exact(self, gf4, m):
        spec = EvaluationCodeSpec.create(hyperbolic_quadric(gf4), m)
        dual = build_functional_code(spec).dual()
        word = line_dual_witness(spec)
        assert int(np.count_nonzero(word)) == m + 2
        result = certify(m + 2, witness_result(dual, word, "line-witness"))
        assert result.certainty is Certainty.EXACT
        assert result.value == m + 2

    def test_hyperbolic_q8(self, gf8):
        spec = EvaluationCodeSpec.create(hyperbolic_quadric(gf8), 6)
        word = line_dual_witness(spec)
        assert build_functional_code(spec).dual().contains(word)

    def test_no_lines(self, gf4):
        spec = EvaluationCodeSpec.create(elliptic_quadric(gf4), 1)
        with pytest.raises(WitnessError):
            line_dual_witness(spec)

    def test_plane_has_no_surface_lines(self, gf4):
        with pytest.raises(WitnessError):
            line_dual_witness(rm_spec(gf4, 1))

    def test_line_not_on_surface(self, gf4):
        spec = EvaluationCodeSpec.create(hyperbolic_quadric(gf4), 1)
        missing = next(i for i in range(400) if i not in set(spec.surface.line_ids.tolist()))
        with pytest.raises(WitnessError, match="does not lie"):
            line_dual_witness(spec, missing)

    def test_too_few_points(self, gf4):
        spec = rm_spec(gf4, 3)
        positions = np.flatnonzero(spec.points[:, 2] == 0)
        with pytest.raises(WitnessError, match="need 5"):
            collinear_dual_word(spec, positions)


class TestSectionWitness:
    def test_conic_on_elliptic_q4(self, gf4):
        spec = EvaluationCodeSpec.create(elliptic_quadric(gf4), 1)
        dual = build_functional_code(spec).dual()
        word = section_dual_witness(spec)
        assert int(np.count_nonzero(word)) == 4
        result = certify(4, witness_result(dual, word, "section-witness"))
        assert result.certainty is Certainty.EXACT

    def test_independent_points(self, gf4):
        # five conic points impose five conditions on quadrics
        spec = EvaluationCodeSpec.create(elliptic_quadric(gf4), 2)
        with pytest.raises(WitnessError, match="independent"):
            section_dual_witness(spec)

    def test_plane_surface(self, gf4):
        with pytest.raises(WitnessError, match="P\\^3"):
            section_dual_witness(rm_spec(gf4, 1))


class TestLinePuncture:
    @pytest.mark.parametrize("q,m", [(4, 1), (4, 2), (5, 3)])
    def test_line_gives_reed_solomon(self, q, m):
        field = field_from_order(q)
        spec = EvaluationCodeSpec.create(hyperbolic_quadric(field), m)
        members = line_point_indices(field)
        positions = next(
            p for p in (chart_positions_on_line(spec, members[i]) for i in spec.surface.line_ids)
            if len(p) == q
        )
        others = [c for c in range(spec.n) if c not in set(positions.tolist())]
        punctured = build_functional_code(spec).puncture(others)
        assert (punctured.n, punctured.k) == (q, m + 1)

        pts = spec.points[positions]
        direction = field.sub(pts[1], pts[0])
        axis = int(np.flatnonzero(direction)[0])
        t = field.div(field.sub(pts[:, axis], pts[0, axis]), direction[axis])
        vandermonde = Matrix.from_rows(field, [field.power(t, j) for j in range(m + 1)])
        assert row_space_equal(punctured.generator, vandermonde)
