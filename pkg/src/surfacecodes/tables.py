"""Recipes for the reproducible parameter tables."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

from surfacecodes.exceptions import BoundError, FormatError
from surfacecodes.picard import BoundReport, bound_basic, bound_improved
from surfacecodes.surface import SurfaceKind

logger = logging.getLogger(__name__)

HYPERBOLIC = SurfaceKind.HYPERBOLIC_QUADRIC
ELLIPTIC = SurfaceKind.ELLIPTIC_QUADRIC


@dataclass(frozen=True)
class RowRecipe:
    """One table row: which code, which theorem and the printed bound."""

    kind: SurfaceKind
    m: int
    theorem: str = "basic"
    classes: str | None = None
    e_override: str | None = None
    expected: int | None = None

    @property
    def key(self) -> str:
        return f"{self.kind.value}:m={self.m}"

    def evaluate(self, q: int) -> BoundReport:
        if self.theorem == "basic":
            return bound_basic(self.kind, q, self.m, classes=self.classes)
        if self.theorem == "improved":
            report = bound_improved(
                self.kind, q, self.m, classes=self.classes, e_override=self.e_override
            )
            if self.e_override is not None:
                automatic = bound_improved(self.kind, q, self.m)
                report.notes.append(f"automatic improved bound {automatic.bound}")
            return report
        raise BoundError(f"unknown theorem {self.theorem!r}")


@dataclass
class TableMeta:
    """Metadata about a reproducible table."""

    description: str
    default_q: int
    rows: Callable[[int], list[RowRecipe]]
    q_selectable: bool = False
    needs_surface: bool = False
    kinds: tuple[SurfaceKind, ...] = field(default_factory=tuple)


def _q4_quadrics(q: int) -> list[RowRecipe]:
    return [
        RowRecipe(HYPERBOLIC, 1, expected=3),
        RowRecipe(ELLIPTIC, 1, expected=4),
        RowRecipe(HYPERBOLIC, 2, expected=4),
        RowRecipe(ELLIPTIC, 2, expected=6),
    ]


def _q8_quadrics(q: int) -> list[RowRecipe]:
    rows: list[RowRecipe] = []
    elliptic = {
        1: RowRecipe(ELLIPTIC, 1, expected=4),
        2: RowRecipe(ELLIPTIC, 2, expected=6),
        3: RowRecipe(ELLIPTIC, 3, expected=8),
        4: RowRecipe(ELLIPTIC, 4, "improved", expected=16),
        5: RowRecipe(ELLIPTIC, 5, "improved", expected=24),
        6: RowRecipe(ELLIPTIC, 6, "improved", classes="H..5H", e_override="4H", expected=32),
    }
    for m in range(1, 7):
        rows.append(RowRecipe(HYPERBOLIC, m, expected=m + 2))
        rows.append(elliptic[m])
    return rows


def _q16_quadrics(q: int) -> list[RowRecipe]:
    return [
        RowRecipe(ELLIPTIC, m, "improved", classes="H..8H", expected=value)
        for m, value in ((8, 32), (9, 48), (10, 64))
    ]


def _q9_cubic(q: int) -> list[RowRecipe]:
    kind = SurfaceKind.CUBIC_NO_LINES
    return [
        RowRecipe(kind, 2, expected=6),
        RowRecipe(kind, 3, expected=9),
        RowRecipe(kind, 4, expected=12),
        RowRecipe(kind, 6, "improved", classes="H..5H", expected=30),
    ]


def _q8_cubic(q: int) -> list[RowRecipe]:
    return [RowRecipe(SurfaceKind.CUBIC_NO_LINES, 5, "improved", expected=24)]


def rm_distance(q: int, m: int) -> int:
    """Dual minimum distance of the degree-m Reed-Muller code on the affine plane."""
    return m + 2 if m <= q - 3 else q * (m + 3 - q)


def _rm(q: int) -> list[RowRecipe]:
    kind = SurfaceKind.PROJECTIVE_PLANE
    return [RowRecipe(kind, m, "improved", expected=rm_distance(q, m)) for m in range(1, 2 * q - 2)]


TABLE_REGISTRY: dict[str, TableMeta] = {
    "q4-quadrics": TableMeta(
        description="Quadric surfaces over GF(4), m = 1, 2",
        default_q=4,
        rows=_q4_quadrics,
        kinds=(HYPERBOLIC, ELLIPTIC),
    ),
    "q8-quadrics": TableMeta(
        description="Quadric surfaces over GF(8), m = 1..6",
        default_q=8,
        rows=_q8_quadrics,
        kinds=(HYPERBOLIC, ELLIPTIC),
    ),
    "q16-quadrics": TableMeta(
        description="Elliptic quadric over GF(16), m = 8..10 with the improved bound",
        default_q=16,
        rows=_q16_quadrics,
        kinds=(ELLIPTIC,),
    ),
    "q9-cubic": TableMeta(
        description="Cubic surface without rational lines over GF(9), m = 2, 3, 4, 6",
        default_q=9,
        rows=_q9_cubic,
        needs_surface=True,
        kinds=(SurfaceKind.CUBIC_NO_LINES,),
    ),
    "q8-cubic": TableMeta(
        description="Cubic surface without rational lines over GF(8), m = 5, improved bound",
        default_q=8,
        rows=_q8_cubic,
        needs_surface=True,
        kinds=(SurfaceKind.CUBIC_NO_LINES,),
    ),
    "rm": TableMeta(
        description="Reed-Muller codes on the affine plane, m = 1..2q-3",
        default_q=4,
        rows=_rm,
        q_selectable=True,
        kinds=(SurfaceKind.PROJECTIVE_PLANE,),
    ),
}


def get_table(name: str) -> TableMeta:
    meta = TABLE_REGISTRY.get(name)
    if meta is None:
        raise BoundError(f"Unknown table {name!r}; choose from {', '.join(TABLE_REGISTRY)}")
    return meta


def table_q(name: str, q: int | None = None) -> int:
    meta = get_table(name)
    if q is None:
        return meta.default_q
    if q != meta.default_q and not meta.q_selectable:
        raise BoundError(f"table {name} is fixed to q={meta.default_q}")
    return q


def table_rows(name: str, q: int | None = None) -> list[RowRecipe]:
    return get_table(name).rows(table_q(name, q))


def table_bounds(name: str, q: int | None = None) -> list[tuple[RowRecipe, BoundReport]]:
    """The bound column of a table, without building any code."""
    q = table_q(name, q)
    out = []
    for recipe in table_rows(name, q):
        report = recipe.evaluate(q)
        if recipe.expected is not None and report.bound != recipe.expected:
            logger.warning(
                "%s %s: computed bound %d, printed %d",
                name, recipe.key, report.bound, recipe.expected,
            )
        out.append((recipe, report))
    return out


# Best-known reference values


def load_best_known(path: Path) -> dict[tuple[str, int, int], str]:
    """Read `kind,q,m,value` lines; `#` starts a comment.

    Values are kept as text so entries such as `>=30` or `24-26` pass
    through to the table unchanged.
    """
    try:
        text = path.read_text()
    except OSError as e:
        raise FormatError(f"cannot read best-known file {path}: {e}") from e
    out: dict[tuple[str, int, int], str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 4:
            raise FormatError(f"{path}:{number}: expected kind,q,m,value")
        kind, q, m, value = parts
        try:
            kind = SurfaceKind(kind).value
            key = (kind, int(q), int(m))
        except ValueError as e:
            raise FormatError(f"{path}:{number}: {e}") from e
        if key in out:
            raise FormatError(f"{path}:{number}: duplicate entry for {kind} q={q} m={m}")
        out[key] = value
    return out
