"""Tests for divisor classes, intersection numbers and dual distance bounds."""

import numpy as np
import pytest

from surfacecodes.agbuilder import (
    EvaluationCodeSpec,
    build_functional_code,
    line_dual_witness,
    rm_dual_witness,
    section_dual_witness,
)
from surfacecodes.code import min_weight_random
from surfacecodes.exceptions import (
    BoundError,
    EmptyClassSetError,
    OutOfRangeError,
    ParityError,
    UnsupportedLatticeError,
)
from surfacecodes.gf import field_from_order
from surfacecodes.picard import (
    PicardLattice,
    adjunction_genus,
    bound_basic,
    bound_improved,
    default_classes,
    delta_of,
    lattice_for,
    m_range,
    pair,
    parse_classes,
    sections_dimension,
    sqrt_term,
    theta_upper,
)
from surfacecodes.surface import SurfaceKind, elliptic_quadric, fermat_cubic, hyperbolic_quadric

PLANE = SurfaceKind.PROJECTIVE_PLANE
HYPERBOLIC = SurfaceKind.HYPERBOLIC_QUADRIC
ELLIPTIC = SurfaceKind.ELLIPTIC_QUADRIC
CUBIC = SurfaceKind.CUBIC_NO_LINES


class TestLattice:
    def test_self_intersection_of_hyperplane(self):
        assert pair(lattice_for(PLANE, 4).H, lattice_for(PLANE, 4).H) == 1
        assert pair(lattice_for(ELLIPTIC, 4).H, lattice_for(ELLIPTIC, 4).H) == 2
        hyperbolic = lattice_for(HYPERBOLIC, 4)
        assert pair(hyperbolic.H, hyperbolic.H) == 2
        assert pair(lattice_for(CUBIC, 9).H, lattice_for(CUBIC, 9).H) == 3

    def test_canonical_degree(self):
        # K.H is -3, -4, -4, -3 on the plane, quadrics and cubics
        cases = ((PLANE, 4, -3), (ELLIPTIC, 4, -4), (HYPERBOLIC, 4, -4), (CUBIC, 9, -3))
        for kind, q, value in cases:
            lattice = lattice_for(kind, q)
            assert pair(lattice.K, lattice.H) == value

    def test_unsupported(self):
        with pytest.raises(UnsupportedLatticeError):
            lattice_for(SurfaceKind.CUSTOM, 4)
        with pytest.raises(UnsupportedLatticeError):
            PicardLattice(PLANE, 4, ("H", "E"), [[1, 0], [1, 0]], (-3, 0), (1, 0), 16)

    def test_cubic_with_lines_from_surface(self, gf4):
        surface = fermat_cubic(gf4)
        lattice = lattice_for(SurfaceKind.CUBIC_WITH_LINES, 4, surface)
        assert lattice.rank == 28
        line = lattice.parse("L")
        assert pair(line, line) == -1
        assert pair(line, lattice.H) == 1
        assert adjunction_genus(line) == 0
        assert lattice.point_bound == 45

    def test_generic_cubic_with_lines(self):
        lattice = lattice_for(SurfaceKind.CUBIC_WITH_LINES, 5)
        assert lattice.labels == ("H", "L1")
        assert theta_upper(lattice.parse("L1")) == 6


class TestDivisorClass:
    def test_parse(self):
        lattice = lattice_for(HYPERBOLIC, 4)
        assert lattice.parse("E+2F").coeffs == (1, 2)
        assert lattice.parse("3H").coeffs == (3, 3)
        assert lattice.parse("K").coeffs == (-2, -2)

    @pytest.mark.parametrize("text", ["Z", "2x", "E++F", ""])
    def test_parse_errors(self, text):
        with pytest.raises(BoundError):
            lattice_for(HYPERBOLIC, 4).parse(text)

    def test_arithmetic(self):
        lattice = lattice_for(HYPERBOLIC, 4)
        e, f = lattice.parse("E"), lattice.parse("F")
        assert (e + f) == lattice.H
        assert (2 * e - f).coeffs == (2, -1)
        assert (-e).coeffs == (-1, 0)
        with pytest.raises(BoundError):
            e + lattice_for(HYPERBOLIC, 8).parse("E")

    def test_labels(self):
        lattice = lattice_for(HYPERBOLIC, 4)
        assert lattice.parse("2E+2F").label == "2H"
        assert lattice.parse("E").label == "E"
        assert str(lattice.parse("E+3F")) == "E+3F"
        assert lattice.cls((1, -1)).label == "E-1F"
        assert lattice.multiple_of_hyperplane(0).label == "0"

    def test_hyperplane_multiple(self):
        lattice = lattice_for(HYPERBOLIC, 4)
        assert lattice.parse("3H").hyperplane_multiple() == 3
        assert lattice.parse("E+2F").hyperplane_multiple() is None

    def test_is_line(self):
        lattice = lattice_for(HYPERBOLIC, 4)
        assert lattice.parse("F").is_line()
        assert not lattice.H.is_line()


class TestGenus:
    def test_plane_curves(self):
        lattice = lattice_for(PLANE, 4)
        assert [adjunction_genus(lattice.multiple_of_hyperplane(a)) for a in (1, 2, 3, 4)] == [
            0, 0, 1, 3,
        ]

    def test_quadric_curves(self):
        lattice = lattice_for(ELLIPTIC, 8)
        assert [adjunction_genus(lattice.multiple_of_hyperplane(a)) for a in (1, 2, 3)] == [0, 1, 4]
        assert adjunction_genus(lattice_for(HYPERBOLIC, 4).parse("E")) == 0

    def test_cubic_plane_section_is_elliptic(self):
        assert adjunction_genus(lattice_for(CUBIC, 9).H) == 1

    def test_parity(self):
        odd = PicardLattice(SurfaceKind.CUSTOM, 4, ("H",), [[1]], (0,), (1,), 16)
        with pytest.raises(ParityError):
            adjunction_genus(odd.H)


class TestTheta:
    def test_sqrt_term(self):
        assert [sqrt_term(q) for q in (4, 8, 9, 16)] == [4, 5, 6, 8]

    def test_lines(self):
        assert theta_upper(lattice_for(HYPERBOLIC, 8).parse("E")) == 9

    def test_plane(self):
        lattice = lattice_for(PLANE, 4)
        assert theta_upper(lattice.multiple_of_hyperplane(3)) == 12
        assert theta_upper(lattice.multiple_of_hyperplane(5)) == 16

    def test_elliptic_partitions(self):
        lattice = lattice_for(ELLIPTIC, 8)
        assert theta_upper(lattice.H) == 9
        # 2H splits into two conics: 9 + 9 beats one genus-1 curve
        assert theta_upper(lattice.multiple_of_hyperplane(2)) == 18

    def test_higher_rank_falls_back_to_point_bound(self):
        lattice = lattice_for(HYPERBOLIC, 4)
        assert theta_upper(lattice.H) == lattice.point_bound == 16

    def test_unsupported_classes(self):
        lattice = lattice_for(HYPERBOLIC, 4)
        with pytest.raises(UnsupportedLatticeError):
            theta_upper(lattice.parse("E+2F"))
        with pytest.raises(UnsupportedLatticeError):
            theta_upper(lattice.multiple_of_hyperplane(0))


class TestClassSets:
    def test_default_classes(self):
        assert [d.label for d in default_classes(lattice_for(HYPERBOLIC, 4), 1)] == [
            "E", "F", "H", "2H",
        ]
        assert [d.label for d in default_classes(lattice_for(PLANE, 4), 1)] == ["H", "2H", "3H"]
        assert [d.label for d in default_classes(lattice_for(CUBIC, 9), 2)] == ["H", "2H"]

    def test_parse_range(self):
        lattice = lattice_for(ELLIPTIC, 16)
        assert [d.label for d in parse_classes(lattice, "H..3H, 5H")] == ["H", "2H", "3H", "5H"]

    def test_parse_errors(self):
        lattice = lattice_for(HYPERBOLIC, 4)
        with pytest.raises(EmptyClassSetError):
            parse_classes(lattice, " , ")
        with pytest.raises(BoundError, match="multiples of H"):
            parse_classes(lattice, "E..F")
        with pytest.raises(EmptyClassSetError):
            delta_of([], lattice.H)

    def test_sections_dimension(self):
        assert sections_dimension(PLANE, 3) == 10
        assert sections_dimension(ELLIPTIC, 2) == 9
        assert sections_dimension(CUBIC, 2) == 10
        with pytest.raises(UnsupportedLatticeError):
            sections_dimension(SurfaceKind.CUSTOM, 2)

    def test_m_range(self):
        assert m_range(PLANE, 4) == (0, 5)
        assert m_range(ELLIPTIC, 8) == (1, 6)


class TestBasicBound:
    @pytest.mark.parametrize(
        "kind,q,m,expected",
        [
            (HYPERBOLIC, 4, 1, 3),
            (HYPERBOLIC, 4, 2, 4),
            (ELLIPTIC, 4, 1, 4),
            (ELLIPTIC, 4, 2, 6),
            (ELLIPTIC, 8, 3, 8),
            (CUBIC, 9, 2, 6),
            (CUBIC, 9, 4, 12),
            (PLANE, 4, 1, 3),
        ],
    )
    def test_values(self, kind, q, m, expected):
        report = bound_basic(kind, q, m)
        assert report.bound == expected
        assert report.theorem == "basic"
        assert report.verified

    def test_report_products(self):
        report = bound_basic(HYPERBOLIC, 4, 1)
        assert [(c.label, c.product) for c in report.classes] == [
            ("E", 3), ("F", 3), ("H", 4), ("2H", 4),
        ]
        assert report.g == "H"
        assert report.canonical == "-2H"
        assert report.interpolation.passed
        data = report.to_dict()
        assert data["schema"] == 1
        assert data["delta_D"] == 3
        assert data["interpolation"]["max_multiple"] == 2

    def test_m_out_of_range(self):
        with pytest.raises(OutOfRangeError):
            bound_basic(ELLIPTIC, 4, 3)
        with pytest.raises(OutOfRangeError):
            bound_basic(ELLIPTIC, 4, 0)

    def test_interpolation_failure(self):
        with pytest.raises(BoundError, match="interpolation"):
            bound_basic(ELLIPTIC, 8, 6, classes="H")

    def test_non_positive(self):
        with pytest.raises(BoundError, match="non-positive"):
            bound_basic(PLANE, 4, 1, classes="H..4H")

    def test_class_set_missing_line_classes(self):
        with pytest.raises(BoundError, match="misses E, F"):
            bound_basic(HYPERBOLIC, 4, 2, classes="H..3H")

    @pytest.mark.parametrize("classes", ["2H", "H,3H", "2H..3H"])
    def test_class_set_with_gaps(self, classes):
        with pytest.raises(BoundError, match="interpolation check: class set misses"):
            bound_basic(ELLIPTIC, 4, 2, classes=classes)

    def test_improved_falls_back_to_basic(self):
        report = bound_improved(ELLIPTIC, 4, 2, classes="2H")
        assert report.bound == bound_basic(ELLIPTIC, 4, 2).bound == 6
        assert not report.interpolation.passed
        assert "misses H" in report.interpolation.method

    def test_explicit_lattice(self, gf4):
        lattice = lattice_for(SurfaceKind.CUBIC_WITH_LINES, 4, fermat_cubic(gf4))
        report = bound_basic(SurfaceKind.CUBIC_WITH_LINES, 4, 1, lattice=lattice)
        assert report.bound >= 1


class TestImprovedBound:
    @pytest.mark.parametrize(
        "kind,q,m,expected",
        [
            (ELLIPTIC, 8, 4, 16),
            (ELLIPTIC, 8, 5, 24),
            (CUBIC, 8, 5, 24),
            (PLANE, 4, 4, 12),
            (PLANE, 5, 1, 3),
        ],
    )
    def test_automatic_search(self, kind, q, m, expected):
        report = bound_improved(kind, q, m)
        assert report.bound == expected
        assert report.verified

    def test_never_below_basic(self):
        for m in range(1, 7):
            assert bound_improved(ELLIPTIC, 8, m).bound >= bound_basic(ELLIPTIC, 8, m).bound

    def test_explicit_class_set(self):
        report = bound_improved(ELLIPTIC, 16, 9, classes="H..8H")
        assert report.bound == 48
        assert report.delta_e == 48
        assert all(item.theta is not None for item in report.classes)

    def test_e_override(self):
        report = bound_improved(ELLIPTIC, 8, 6, classes="H..5H", e_override="4H")
        assert report.bound == 32
        assert report.e_classes == ["4H"]
        assert report.to_dict()["E"] == ["4H"]

    def test_e_override_must_be_subset(self):
        with pytest.raises(BoundError, match="subset"):
            bound_improved(ELLIPTIC, 8, 4, classes="H..3H", e_override="5H")

    def test_report_records_theta(self):
        report = bound_improved(ELLIPTIC, 8, 4)
        kept = [c for c in report.classes if c.kept]
        assert [c.label for c in kept] == report.e_classes
        assert all(c.theta >= c.product for c in kept)
        assert all(c.theta < c.product for c in report.classes if not c.kept)


def _witness_weight(kind, m):
    """Weight of an exhibited dual codeword over GF(4)."""
    field = field_from_order(4)
    if kind is PLANE:
        return int(np.count_nonzero(rm_dual_witness(field, m)))
    if kind is HYPERBOLIC:
        spec = EvaluationCodeSpec.create(hyperbolic_quadric(field), m)
        return int(np.count_nonzero(line_dual_witness(spec)))
    spec = EvaluationCodeSpec.create(elliptic_quadric(field), m)
    if m == 1:
        return int(np.count_nonzero(section_dual_witness(spec)))
    return min_weight_random(build_functional_code(spec).dual(), budget=30).upper


class TestClassSetSoundness:
    @pytest.mark.parametrize(
        "kind,m,classes",
        [
            (HYPERBOLIC, 1, "H..3H"),
            (HYPERBOLIC, 1, "2H"),
            (HYPERBOLIC, 1, "E,F,2H"),
            (HYPERBOLIC, 1, "E,H,2H"),
            (HYPERBOLIC, 1, "E,F,H,2H"),
            (HYPERBOLIC, 2, "H..3H"),
            (HYPERBOLIC, 2, "3H"),
            (HYPERBOLIC, 2, "E,F,H..3H"),
            (ELLIPTIC, 1, "H"),
            (ELLIPTIC, 1, "2H"),
            (ELLIPTIC, 1, "H..3H"),
            (ELLIPTIC, 2, "2H"),
            (ELLIPTIC, 2, "H,3H"),
            (ELLIPTIC, 2, "H..3H"),
            (PLANE, 1, "H"),
            (PLANE, 1, "2H..3H"),
            (PLANE, 2, "H..4H"),
            (PLANE, 3, "3H"),
            (PLANE, 4, "H..6H"),
            (PLANE, 5, "4H,5H"),
            (PLANE, 5, "H..7H"),
        ],
    )
    def test_bound_never_exceeds_a_dual_word(self, kind, m, classes):
        weight = _witness_weight(kind, m)
        try:
            basic = bound_basic(kind, 4, m, classes=classes).bound
        except BoundError:
            basic = None
        if basic is not None:
            assert basic <= weight
        assert bound_improved(kind, 4, m, classes=classes).bound <= weight

    @pytest.mark.parametrize("classes", ["H", "2H", "L1,2H", "L1,H", "L1,H..3H"])
    def test_cubic_with_lines(self, gf4, classes):
        surface = fermat_cubic(gf4)
        lattice = lattice_for(SurfaceKind.CUBIC_WITH_LINES, 4, surface)
        weight = int(np.count_nonzero(line_dual_witness(EvaluationCodeSpec.create(surface, 1))))
        assert weight == 3
        try:
            report = bound_basic(SurfaceKind.CUBIC_WITH_LINES, 4, 1, classes, lattice)
        except BoundError:
            return
        assert report.bound <= weight
