"""Divisor classes, intersection pairing and lower bounds for dual minimum distances."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, isqrt
from typing import Any

import numpy as np

from surfacecodes.exceptions import (
    BoundError,
    EmptyClassSetError,
    OutOfRangeError,
    ParityError,
    UnsupportedLatticeError,
)
from surfacecodes.surface import Surface, SurfaceKind

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
_TERM = re.compile(r"^(-?\d*)([A-Z][A-Za-z0-9]*)$")


@dataclass(frozen=True, eq=False)
class PicardLattice:
    """A generating set of divisor classes with its intersection matrix.

    `point_bound` caps the number of evaluation points any curve can carry;
    `theta_hyperplane` is the exact Theta(H) when it is known.
    """

    kind: SurfaceKind
    q: int
    labels: tuple[str, ...]
    gram: np.ndarray
    canonical: tuple[int, ...]
    hyperplane: tuple[int, ...]
    point_bound: int
    theta_hyperplane: int | None = None
    line_labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        gram = np.asarray(self.gram, dtype=np.int64)
        if gram.shape != (len(self.labels),) * 2 or not np.array_equal(gram, gram.T):
            raise UnsupportedLatticeError("intersection matrix must be square and symmetric")
        object.__setattr__(self, "gram", gram)

    @property
    def rank(self) -> int:
        return len(self.labels)

    def cls(self, coeffs) -> DivisorClass:
        return DivisorClass(self, tuple(int(c) for c in coeffs))

    def multiple_of_hyperplane(self, a: int) -> DivisorClass:
        return self.cls([a * h for h in self.hyperplane])

    @property
    def K(self) -> DivisorClass:  # noqa: N802
        return self.cls(self.canonical)

    @property
    def H(self) -> DivisorClass:  # noqa: N802
        return self.cls(self.hyperplane)

    def line_classes(self) -> list[DivisorClass]:
        return [self.parse(label) for label in self.line_labels]

    def parse(self, text: str) -> DivisorClass:
        """Parse labels such as `3H`, `E`, `L1` or `E+2F`; `L` means `L1`."""
        total = np.zeros(self.rank, dtype=np.int64)
        for raw in text.replace(" ", "").split("+"):
            match = _TERM.match(raw)
            if not match:
                raise BoundError(f"cannot parse divisor class {text!r}")
            digits, name = match.groups()
            scale = int(digits) if digits not in ("", "-") else (-1 if digits == "-" else 1)
            if name == "H":
                vector = np.asarray(self.hyperplane)
            elif name == "K":
                vector = np.asarray(self.canonical)
            else:
                if name == "L" and "L1" in self.labels:
                    name = "L1"
                if name not in self.labels:
                    raise BoundError(f"unknown class {name!r}; basis is {', '.join(self.labels)}")
                vector = np.eye(self.rank, dtype=np.int64)[self.labels.index(name)]
            total = total + scale * vector
        return self.cls(total)


@dataclass(frozen=True)
class DivisorClass:
    """Integer combination of the lattice's generators."""

    lattice: PicardLattice
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.lattice.rank:
            raise BoundError(f"class needs {self.lattice.rank} coefficients, got {self.coeffs}")

    def _check(self, other: DivisorClass) -> None:
        if other.lattice is not self.lattice:
            raise BoundError("divisor classes live on different lattices")

    def __add__(self, other: DivisorClass) -> DivisorClass:
        self._check(other)
        return self.lattice.cls(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        self._check(other)
        return self.lattice.cls(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __mul__(self, scale: int) -> DivisorClass:
        return self.lattice.cls(scale * a for a in self.coeffs)

    __rmul__ = __mul__

    def __neg__(self) -> DivisorClass:
        return self * -1

    def hyperplane_multiple(self) -> int | None:
        """a when this class is a*H, else None."""
        h = self.lattice.hyperplane
        lead = next(i for i, c in enumerate(h) if c)
        if self.coeffs[lead] % h[lead]:
            return None
        a = self.coeffs[lead] // h[lead]
        return a if all(c == a * x for c, x in zip(self.coeffs, h)) else None

    def is_line(self) -> bool:
        lattice = self.lattice
        return any(self == lattice.parse(label) for label in lattice.line_labels)

    @property
    def label(self) -> str:
        a = self.hyperplane_multiple()
        if a is not None:
            return "H" if a == 1 else ("0" if a == 0 else f"{a}H")
        parts = []
        for name, c in zip(self.lattice.labels, self.coeffs):
            if c:
                parts.append(name if c == 1 else f"{c}{name}")
        return "+".join(parts).replace("+-", "-")

    def __str__(self) -> str:
        return self.label


def pair(d1: DivisorClass, d2: DivisorClass) -> int:
    """Intersection number d1 . d2."""
    d1._check(d2)
    return int(np.asarray(d1.coeffs) @ d1.lattice.gram @ np.asarray(d2.coeffs))


def adjunction_genus(d: DivisorClass) -> int:
    """Arithmetic genus 1 + D.(D+K)/2."""
    value = pair(d, d + d.lattice.K)
    if value % 2:
        raise ParityError(f"D.(D+K) = {value} is odd for {d}")
    return 1 + value // 2


# Lattices of the supported surfaces


def lattice_for(kind: SurfaceKind, q: int, surface: Surface | None = None) -> PicardLattice:
    """Preset lattice; a cubic with lines takes its rational lines from `surface` when given."""
    kind = SurfaceKind(kind)
    chart_points = q * q
    if kind is SurfaceKind.PROJECTIVE_PLANE:
        return PicardLattice(kind, q, ("H",), [[1]], (-3,), (1,), chart_points, theta_hyperplane=q)
    if kind is SurfaceKind.ELLIPTIC_QUADRIC:
        return PicardLattice(kind, q, ("H",), [[2]], (-2,), (1,), chart_points, q + 1)
    if kind is SurfaceKind.HYPERBOLIC_QUADRIC:
        return PicardLattice(
            kind, q, ("E", "F"), [[0, 1], [1, 0]], (-2, -2), (1, 1), chart_points,
            line_labels=("E", "F"),
        )
    if kind is SurfaceKind.CUBIC_NO_LINES:
        return PicardLattice(kind, q, ("H",), [[3]], (-1,), (1,), q * q + 2 * q + 1)
    if kind is SurfaceKind.CUBIC_WITH_LINES:
        return _cubic_with_lines(q, surface)
    raise UnsupportedLatticeError(f"no Picard lattice preset for {kind.value} surfaces")


def _cubic_with_lines(q: int, surface: Surface | None) -> PicardLattice:
    if surface is None:
        meets = np.zeros((1, 1), dtype=bool)
        point_bound = q * q + 7 * q + 1
    else:
        from surfacecodes.projspace import line_point_indices

        members = line_point_indices(surface.field)[surface.line_ids]
        if not len(members):
            raise UnsupportedLatticeError("cubic-with-lines surface has no rational line")
        meets = np.array([[bool(np.intersect1d(a, b).size) for b in members] for a in members])
        point_bound = surface.num_points
    r = len(meets)
    gram = np.zeros((r + 1, r + 1), dtype=np.int64)
    gram[0, 0] = 3
    gram[0, 1:] = gram[1:, 0] = 1
    gram[1:, 1:] = meets.astype(np.int64)
    np.fill_diagonal(gram[1:, 1:], -1)
    labels = ("H", *(f"L{i + 1}" for i in range(r)))
    canonical = (-1,) + (0,) * r
    hyperplane = (1,) + (0,) * r
    return PicardLattice(
        SurfaceKind.CUBIC_WITH_LINES, q, labels, gram, canonical, hyperplane, point_bound,
        line_labels=labels[1:2],
    )


# Theta: points of the evaluation set on an effective divisor


def sqrt_term(q: int) -> int:
    """floor(2 sqrt(q)), exactly."""
    return isqrt(4 * q)


def theta_upper(d: DivisorClass) -> int:
    """Upper bound for the number of evaluation points on a curve in class d.

    Line classes carry q+1 points. On the plane a*H carries at most a*q. On
    rank-one surfaces the class is split over all partitions a = a_1 + ... and
    each irreducible part bounded by q+1+pi(a_i H) floor(2 sqrt q), with the
    exact Theta(H) substituted when known. Lattices of higher rank fall back
    to the point bound, which caps every estimate.
    """
    lattice = d.lattice
    q = lattice.q
    if d.is_line():
        return min(q + 1, lattice.point_bound)
    a = d.hyperplane_multiple()
    if a is None or a < 1:
        raise UnsupportedLatticeError(f"Theta is only estimated for lines and a*H, not {d}")
    if lattice.kind is SurfaceKind.PROJECTIVE_PLANE:
        return min(a * q, lattice.point_bound)
    if lattice.rank > 1:
        return lattice.point_bound
    return min(_partition_bound(lattice, a), lattice.point_bound)


def _partition_bound(lattice: PicardLattice, a: int) -> int:
    q = lattice.q
    root = sqrt_term(q)

    def part(size: int) -> int:
        if size == 1 and lattice.theta_hyperplane is not None:
            return lattice.theta_hyperplane
        return q + 1 + adjunction_genus(lattice.multiple_of_hyperplane(size)) * root

    @lru_cache(maxsize=None)
    def best(total: int) -> int:
        return max([part(total)] + [part(s) + best(total - s) for s in range(1, total)])

    return best(a)


def sections_dimension(kind: SurfaceKind, a: int) -> int:
    """dim of the degree-a forms restricted to the surface."""
    if kind is SurfaceKind.PROJECTIVE_PLANE:
        return comb(a + 2, 2)
    if kind.is_quadric:
        return (a + 1) ** 2
    if kind.is_cubic:
        return (3 * a * a + 3 * a + 2) // 2
    raise UnsupportedLatticeError(f"no section count for {kind.value}")


def delta_of(classes: list[DivisorClass], g: DivisorClass) -> int:
    """min over D of D.(G - K - D)."""
    if not classes:
        raise EmptyClassSetError("the class set is empty")
    k = g.lattice.K
    return min(pair(d, g - k - d) for d in classes)


# Bound reports


@dataclass
class ClassProduct:
    label: str
    coeffs: tuple[int, ...]
    product: int
    theta: int | None = None
    kept: bool = True

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"class": self.label, "coeffs": list(self.coeffs),
                               "product": self.product}
        if self.theta is not None:
            out["theta_upper"] = self.theta
            out["in_E"] = self.kept
        return out


@dataclass
class InterpolationCheck:
    """Dimension count showing any delta-1 evaluation points lie on a curve of the class set."""

    max_multiple: int
    dimension: int
    required: int
    passed: bool
    method: str = "dimension count"

    def to_dict(self) -> dict[str, Any]:
        return {
            "max_multiple": self.max_multiple,
            "dimension": self.dimension,
            "required": self.required,
            "passed": self.passed,
            "method": self.method,
        }


@dataclass
class BoundReport:
    """A lower bound for the dual minimum distance with every intermediate product."""

    kind: SurfaceKind
    q: int
    m: int
    theorem: str
    g: str
    canonical: str
    classes: list[ClassProduct]
    delta_d: int
    interpolation: InterpolationCheck
    bound: int
    e_classes: list[str] = field(default_factory=list)
    delta_e: int | None = None
    unjustified_exclusions: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    vanishing_assumed: bool = True

    @property
    def verified(self) -> bool:
        """False when a class was dropped from E without a Theta argument."""
        return not self.unjustified_exclusions

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "kind": self.kind.value,
            "q": self.q,
            "m": self.m,
            "theorem": self.theorem,
            "G": self.g,
            "K": self.canonical,
            "classes": [c.to_dict() for c in self.classes],
            "delta_D": self.delta_d,
            "E": self.e_classes,
            "delta_E": self.delta_e,
            "interpolation": self.interpolation.to_dict(),
            "bound": self.bound,
            "unjustified_exclusions": self.unjustified_exclusions,
            "vanishing_assumed": self.vanishing_assumed,
            "notes": self.notes,
        }


def m_range(kind: SurfaceKind, q: int) -> tuple[int, int]:
    if kind is SurfaceKind.PROJECTIVE_PLANE:
        return 0, 2 * q - 3
    return 1, q - 2


def _check_m(kind: SurfaceKind, q: int, m: int) -> None:
    low, high = m_range(kind, q)
    if not low <= m <= high:
        raise OutOfRangeError(f"m={m} outside [{low}, {high}] for {kind.value} over GF({q})")


def default_classes(lattice: PicardLattice, m: int) -> list[DivisorClass]:
    """Line classes followed by H..aH with a = m+2 (plane), m+1 (quadrics) or m (cubics)."""
    kind = lattice.kind
    if kind is SurfaceKind.PROJECTIVE_PLANE:
        top = m + 2
    elif kind.is_quadric:
        top = m + 1
    else:
        top = m
    return lattice.line_classes() + [lattice.multiple_of_hyperplane(a) for a in range(1, top + 1)]


def parse_classes(lattice: PicardLattice, text: str) -> list[DivisorClass]:
    """Comma separated labels; `H..5H` expands to H,2H,...,5H."""
    out: list[DivisorClass] = []
    for item in (s.strip() for s in text.split(",")):
        if not item:
            continue
        if ".." in item:
            first, _, last = item.partition("..")
            low = lattice.parse(first).hyperplane_multiple()
            high = lattice.parse(last).hyperplane_multiple()
            if low is None or high is None:
                raise BoundError(f"ranges need multiples of H: {item!r}")
            out.extend(lattice.multiple_of_hyperplane(a) for a in range(low, high + 1))
        else:
            out.append(lattice.parse(item))
    if not out:
        raise EmptyClassSetError("the class set is empty")
    return out


def _interpolation(lattice: PicardLattice, classes: list[DivisorClass], delta: int):
    multiples = {a for a in (d.hyperplane_multiple() for d in classes) if a is not None and a > 0}
    if not multiples:
        return InterpolationCheck(0, 0, delta, False, "no multiple of H in the class set")
    top = max(multiples)
    dimension = sections_dimension(lattice.kind, top)
    # the curve through delta-1 points splits into line and H-multiple components
    gaps = [lattice.multiple_of_hyperplane(a).label for a in range(1, top) if a not in multiples]
    present = {d.coeffs for d in classes}
    gaps += [d.label for d in lattice.line_classes() if d.coeffs not in present]
    if gaps:
        return InterpolationCheck(
            top, dimension, delta, False, f"class set misses {', '.join(gaps)}"
        )
    passed = dimension >= delta
    method = "dimension count"
    if not passed and lattice.kind is SurfaceKind.PROJECTIVE_PLANE and top >= lattice.q:
        passed = True
        method = "every chart point lies on q lines"
    return InterpolationCheck(top, dimension, delta, passed, method)


def _products(lattice: PicardLattice, classes: list[DivisorClass], g: DivisorClass):
    k = lattice.K
    return [ClassProduct(d.label, d.coeffs, pair(d, g - k - d)) for d in classes]


def bound_basic(
    kind: SurfaceKind,
    q: int,
    m: int,
    classes: list[DivisorClass] | str | None = None,
    lattice: PicardLattice | None = None,
) -> BoundReport:
    """d_perp >= delta(D) = min over D of D.(G - K - D), with G = mH."""
    kind = SurfaceKind(kind)
    _check_m(kind, q, m)
    lattice = lattice or lattice_for(kind, q)
    if isinstance(classes, str):
        classes = parse_classes(lattice, classes)
    classes = classes if classes is not None else default_classes(lattice, m)
    g = lattice.multiple_of_hyperplane(m)
    products = _products(lattice, classes, g)
    delta = delta_of(classes, g)
    check = _interpolation(lattice, classes, delta)
    if not check.passed:
        detail = check.method
        if detail == "dimension count":
            detail = f"dimension {check.dimension} < {delta}"
        raise BoundError(f"class set fails the interpolation check: {detail}")
    if delta < 1:
        raise BoundError(f"class set gives a non-positive bound {delta}")
    return BoundReport(
        kind=kind, q=q, m=m, theorem="basic", g=g.label, canonical=lattice.K.label,
        classes=products, delta_d=delta, interpolation=check, bound=delta,
    )


def _improve(lattice, classes, g, e_override=None):
    """(products with Theta, E, delta(E), unjustified exclusions) for one class set."""
    products = _products(lattice, classes, g)
    for item, d in zip(products, classes):
        item.theta = theta_upper(d)
        item.kept = item.theta >= item.product
    justified = [p.label for p in products if p.kept]
    unjustified: list[str] = []
    if e_override is not None:
        labels = {p.label for p in products}
        missing = [e for e in e_override if e not in labels]
        if missing:
            raise BoundError(f"E must be a subset of D; not in D: {', '.join(missing)}")
        unjustified = [label for label in justified if label not in e_override]
        for item in products:
            item.kept = item.label in e_override
    kept = [p for p in products if p.kept]
    delta_e = min(p.product for p in kept) if kept else None
    return products, [p.label for p in kept], delta_e, unjustified


def bound_improved(
    kind: SurfaceKind,
    q: int,
    m: int,
    classes: list[DivisorClass] | str | None = None,
    e_override: list[str] | str | None = None,
    lattice: PicardLattice | None = None,
) -> BoundReport:
    """d_perp >= delta(E), E the classes of D whose Theta estimate reaches their product.

    Without an explicit class set the families {lines, H..aH} are tried for
    every a and the best valid delta(E) is kept (ties go to the larger a).
    An E override is applied as given; classes it drops without a Theta
    argument are listed under `unjustified_exclusions`. The result is never
    below the basic bound.
    """
    kind = SurfaceKind(kind)
    basic = bound_basic(kind, q, m, lattice=lattice)
    lattice = lattice or lattice_for(kind, q)
    if isinstance(classes, str):
        classes = parse_classes(lattice, classes)
    if isinstance(e_override, str):
        e_override = [d.label for d in parse_classes(lattice, e_override)]
    g = lattice.multiple_of_hyperplane(m)

    if classes is not None or e_override is not None:
        candidates = [classes if classes is not None else default_classes(lattice, m)]
    else:
        candidates = []
        lines = lattice.line_classes()
        a = 1
        while pair(lattice.multiple_of_hyperplane(a), g - lattice.K) > pair(
            lattice.multiple_of_hyperplane(a), lattice.multiple_of_hyperplane(a)
        ):
            candidates.append(lines + [lattice.multiple_of_hyperplane(b) for b in range(1, a + 1)])
            a += 1

    best: BoundReport | None = None
    best_valid = False
    for cand in candidates:
        products, e_labels, delta_e, unjustified = _improve(lattice, cand, g, e_override)
        delta_d = delta_of(cand, g)
        notes: list[str] = []
        if delta_e is None:
            notes.append("E is empty; basic bound kept")
            check = _interpolation(lattice, cand, delta_d)
        else:
            check = _interpolation(lattice, cand, delta_e)
        if delta_e is not None and not check.passed:
            notes.append(
                f"interpolation check fails for delta(E)={delta_e} ({check.method});"
                " basic bound kept"
            )
        valid = delta_e is not None and check.passed
        value = delta_e if valid else basic.bound
        if value < basic.bound:
            notes.append(f"delta(E)={value} is below the basic bound {basic.bound}")
            value = basic.bound
        if unjustified:
            logger.warning(
                "E override drops %s without a Theta argument (%s m=%d)",
                ", ".join(unjustified), kind.value, m,
            )
        report = BoundReport(
            kind=kind, q=q, m=m, theorem="improved", g=g.label, canonical=lattice.K.label,
            classes=products, delta_d=delta_d, interpolation=check, bound=value,
            e_classes=e_labels, delta_e=delta_e, unjustified_exclusions=unjustified, notes=notes,
        )
        better = best is None or report.bound > best.bound
        if better or (report.bound == best.bound and (valid or not best_valid)):
            best, best_valid = report, valid
    if best is None:
        raise EmptyClassSetError("no class family gives a positive product")
    return best
