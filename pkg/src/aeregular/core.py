"""Exact interval scalars and matrices with per-entry quantifier tags.

An interval matrix is the box of real matrices between an entrywise lower
and upper bound; a quantified interval matrix additionally marks every entry
as universally or existentially chosen.  All endpoints are exact rationals,
every operation here is a pure function over immutable values, and nothing
rounds: classification of singularity is not robust to rounding, so floats
are banned from this layer entirely.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ShapeMismatchError
from .linalg import RationalMatrix, as_fraction

Position = tuple[int, int]


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: [{self.lo}, {self.hi}]")

    @staticmethod
    def point(value) -> "Interval":
        v = as_fraction(value)
        return Interval(v, v)

    @staticmethod
    def make(x) -> "Interval":
        """Coerce an Interval, a (lo, hi) pair, or a scalar (degenerate)."""
        if isinstance(x, Interval):
            return x
        if isinstance(x, (tuple, list)) and len(x) == 2:
            return Interval(as_fraction(x[0]), as_fraction(x[1]))
        return Interval.point(x)

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def rad(self) -> Fraction:
        return (self.hi - self.lo) / 2

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def mag(self) -> Fraction:
        """Largest absolute value over the interval: |mid| + rad."""
        return abs(self.mid) + self.rad

    @property
    def mig(self) -> Fraction:
        """Smallest absolute value over the interval; 0 when it straddles 0."""
        if self.lo <= 0 <= self.hi:
            return Fraction(0)
        return min(abs(self.lo), abs(self.hi))

    @property
    def nearest_to_zero(self) -> Fraction:
        """The point of the interval with minimal absolute value."""
        if self.lo <= 0 <= self.hi:
            return Fraction(0)
        return self.lo if self.lo > 0 else self.hi

    @property
    def farthest_from_zero(self) -> Fraction:
        """An endpoint attaining the magnitude (ties go to the lower end)."""
        return self.lo if abs(self.lo) >= abs(self.hi) else self.hi

    def __contains__(self, value) -> bool:
        v = as_fraction(value)
        return self.lo <= v <= self.hi

    def __add__(self, other) -> "Interval":
        o = Interval.make(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __str__(self) -> str:
        if self.is_degenerate:
            return str(self.lo)
        return f"[{self.lo},{self.hi}]"


def magnitude(a: Interval) -> Fraction:
    return a.mag


def mignitude(a: Interval) -> Fraction:
    return a.mig


class Quantifier(Enum):
    FORALL = "A"
    EXISTS = "E"


@dataclass(frozen=True)
class IntervalMatrix:
    """Rectangular grid of intervals; the box between lower() and upper()."""

    entries: tuple[tuple[Interval, ...], ...]

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise ShapeMismatchError("interval matrix must have at least one row and column")
        width = len(self.entries[0])
        if any(len(r) != width for r in self.entries):
            raise ShapeMismatchError("ragged rows")

    @staticmethod
    def from_rows(rows: Iterable[Iterable]) -> "IntervalMatrix":
        return IntervalMatrix(tuple(tuple(Interval.make(x) for x in r) for r in rows))

    @staticmethod
    def from_bounds(lower: RationalMatrix, upper: RationalMatrix) -> "IntervalMatrix":
        if (lower.rows, lower.cols) != (upper.rows, upper.cols):
            raise ShapeMismatchError("bound matrices differ in shape")
        return IntervalMatrix(
            tuple(
                tuple(Interval(lo, hi) for lo, hi in zip(rl, ru))
                for rl, ru in zip(lower.entries, upper.entries)
            )
        )

    @staticmethod
    def from_point(a: RationalMatrix) -> "IntervalMatrix":
        return IntervalMatrix(tuple(tuple(Interval.point(x) for x in r) for r in a.entries))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: Position) -> Interval:
        i, j = ij
        return self.entries[i][j]

    def lower(self) -> RationalMatrix:
        return RationalMatrix(tuple(tuple(e.lo for e in r) for r in self.entries))

    def upper(self) -> RationalMatrix:
        return RationalMatrix(tuple(tuple(e.hi for e in r) for r in self.entries))

    def midpoint(self) -> RationalMatrix:
        return RationalMatrix(tuple(tuple(e.mid for e in r) for r in self.entries))

    def radius(self) -> RationalMatrix:
        return RationalMatrix(tuple(tuple(e.rad for e in r) for r in self.entries))

    def transpose(self) -> "IntervalMatrix":
        return IntervalMatrix(tuple(zip(*self.entries)))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntervalMatrix":
        return IntervalMatrix(
            tuple(tuple(self.entries[i][j] for j in cols) for i in rows)
        )

    def permute(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "IntervalMatrix":
        """Reorder rows/columns; perm[k] is the source index of slot k."""
        return self.submatrix(row_perm, col_perm)

    def nondegenerate_positions(self) -> tuple[Position, ...]:
        """Row-major positions whose entry has positive radius."""
        return tuple(
            (i, j)
            for i in range(self.rows)
            for j in range(self.cols)
            if not self.entries[i][j].is_degenerate
        )

    def __add__(self, other: "IntervalMatrix") -> "IntervalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatchError("interval matrix shapes differ")
        return IntervalMatrix(
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries))
        )

    def add_point(self, a: RationalMatrix) -> "IntervalMatrix":
        """Shift every interval by the corresponding real entry."""
        if (self.rows, self.cols) != (a.rows, a.cols):
            raise ShapeMismatchError("shapes differ")
        return IntervalMatrix(
            tuple(
                tuple(e + v for e, v in zip(re, rv))
                for re, rv in zip(self.entries, a.entries)
            )
        )

    def contains(self, a: RationalMatrix) -> bool:
        if (self.rows, self.cols) != (a.rows, a.cols):
            return False
        return all(
            v in e for re, rv in zip(self.entries, a.entries) for e, v in zip(re, rv)
        )

    def __str__(self) -> str:
        return "\n".join(" ".join(str(e) for e in r) for r in self.entries)


def midpoint_radius(m: IntervalMatrix) -> tuple[RationalMatrix, RationalMatrix]:
    """Exact (center, half-width) pair; center ± half-width recovers the bounds."""
    return m.midpoint(), m.radius()


def comparison_matrix(a: RationalMatrix) -> RationalMatrix:
    """Keep diagonal magnitudes, negate off-diagonal magnitudes."""
    if not a.is_square:
        raise ShapeMismatchError("comparison matrix requires a square matrix")
    return RationalMatrix(
        tuple(
            tuple(abs(v) if i == j else -abs(v) for j, v in enumerate(r))
            for i, r in enumerate(a.entries)
        )
    )


@dataclass(frozen=True, order=True)
class VertexIndex:
    """Endpoint choice (LOW/HIGH) for each nondegenerate entry, row-major.

    Bit k of `bits` selects the upper endpoint of the k-th nondegenerate
    entry; 0 is the all-LOW vertex.  The integer ordering of `bits` fixes a
    deterministic enumeration, which keeps reported witnesses reproducible.
    """

    width: int
    bits: int

    def __post_init__(self):
        if self.width < 0 or not 0 <= self.bits < (1 << self.width):
            raise ValueError(f"vertex bits {self.bits} out of range for width {self.width}")

    @staticmethod
    def all_low(width: int) -> "VertexIndex":
        return VertexIndex(width, 0)

    @staticmethod
    def all_high(width: int) -> "VertexIndex":
        return VertexIndex(width, (1 << width) - 1 if width else 0)

    @staticmethod
    def from_choices(choices: str | Sequence[str]) -> "VertexIndex":
        bits = 0
        for k, c in enumerate(choices):
            if c in ("H", "h"):
                bits |= 1 << k
            elif c not in ("L", "l"):
                raise ValueError(f"vertex choice must be L or H, got {c!r}")
        return VertexIndex(len(choices), bits)

    def is_high(self, k: int) -> bool:
        return bool(self.bits >> k & 1)

    def choices(self) -> str:
        return "".join("H" if self.is_high(k) else "L" for k in range(self.width))


def vertex_matrix(m: IntervalMatrix, v: VertexIndex) -> RationalMatrix:
    """The member of `m` selected by an endpoint assignment."""
    positions = m.nondegenerate_positions()
    if v.width != len(positions):
        raise ShapeMismatchError(
            f"vertex has {v.width} bits but matrix has {len(positions)} nondegenerate entries"
        )
    grid = [[e.lo for e in r] for r in m.entries]
    for k, (i, j) in enumerate(positions):
        if v.is_high(k):
            grid[i][j] = m.entries[i][j].hi
    return RationalMatrix.from_rows(grid)


def sign_vertex_matrix(m: IntervalMatrix, y: Sequence[int], z: Sequence[int]) -> RationalMatrix:
    """Midpoint minus sign-scaled radius: center[i][j] - y[i]*z[j]*halfwidth[i][j].

    For sign vectors y, z these are the rank-one-sign-pattern vertex members
    used by the determinant-sign regularity test.
    """
    if not m.is_square:
        raise ShapeMismatchError("sign vertex matrix requires a square matrix")
    n = m.rows
    if len(y) != n or len(z) != n:
        raise ShapeMismatchError("sign vectors must have length n")
    if any(s not in (1, -1) for s in y) or any(s not in (1, -1) for s in z):
        raise ValueError("sign vectors must have entries +1 or -1")
    return RationalMatrix(
        tuple(
            tuple(e.mid - y[i] * z[j] * e.rad for j, e in enumerate(row))
            for i, row in enumerate(m.entries)
        )
    )


@dataclass(frozen=True)
class QIMatrix:
    """Interval matrix with one quantifier tag per entry.

    Tags on degenerate entries are kept as given but are semantically inert:
    `split` routes every degenerate entry to the universal side, and all
    deciders consume the matrix through `split` or `effective_quantifier`,
    so no verdict can depend on the tag of a point entry.
    """

    base: IntervalMatrix
    quants: tuple[tuple[Quantifier, ...], ...]

    def __post_init__(self):
        if len(self.quants) != self.base.rows or any(
            len(r) != self.base.cols for r in self.quants
        ):
            raise ShapeMismatchError("quantifier grid does not match the matrix shape")

    @staticmethod
    def uniform(base: IntervalMatrix, q: Quantifier) -> "QIMatrix":
        return QIMatrix(base, tuple((q,) * base.cols for _ in range(base.rows)))

    @staticmethod
    def from_rows(rows: Iterable[Iterable]) -> "QIMatrix":
        """Each cell is an Interval/scalar/(lo,hi) or ((lo,hi), Quantifier)."""
        base_rows: list[list[Interval]] = []
        quant_rows: list[list[Quantifier]] = []
        for r in rows:
            brow: list[Interval] = []
            qrow: list[Quantifier] = []
            for cell in r:
                if (
                    isinstance(cell, tuple)
                    and len(cell) == 2
                    and isinstance(cell[1], Quantifier)
                ):
                    brow.append(Interval.make(cell[0]))
                    qrow.append(cell[1])
                else:
                    brow.append(Interval.make(cell))
                    qrow.append(Quantifier.FORALL)
            base_rows.append(brow)
            quant_rows.append(qrow)
        return QIMatrix(
            IntervalMatrix(tuple(tuple(r) for r in base_rows)),
            tuple(tuple(r) for r in quant_rows),
        )

    @property
    def rows(self) -> int:
        return self.base.rows

    @property
    def cols(self) -> int:
        return self.base.cols

    @property
    def is_square(self) -> bool:
        return self.base.is_square

    def effective_quantifier(self, i: int, j: int) -> Quantifier:
        if self.base.entries[i][j].is_degenerate:
            return Quantifier.FORALL
        return self.quants[i][j]

    def exists_positions(self) -> tuple[Position, ...]:
        """Nondegenerate entries that are existentially chosen, row-major."""
        return tuple(
            (i, j)
            for i in range(self.rows)
            for j in range(self.cols)
            if self.effective_quantifier(i, j) is Quantifier.EXISTS
        )

    def forall_positions(self) -> tuple[Position, ...]:
        """Nondegenerate entries that are universally chosen, row-major."""
        return tuple(
            (i, j)
            for i in range(self.rows)
            for j in range(self.cols)
            if not self.base.entries[i][j].is_degenerate
            and self.effective_quantifier(i, j) is Quantifier.FORALL
        )

    def split(self) -> tuple[IntervalMatrix, IntervalMatrix]:
        """Disjoint decomposition (universal part, existential part).

        Each entry lives wholly in one part; the other part holds the
        degenerate zero there, so the two parts add back to the base.
        Degenerate entries (point values) always sit in the universal part.
        """
        zero = Interval.point(0)
        fa_rows = []
        ex_rows = []
        for i in range(self.rows):
            fa_row = []
            ex_row = []
            for j in range(self.cols):
                e = self.base.entries[i][j]
                if self.effective_quantifier(i, j) is Quantifier.FORALL:
                    fa_row.append(e)
                    ex_row.append(zero)
                else:
                    fa_row.append(zero)
                    ex_row.append(e)
            fa_rows.append(tuple(fa_row))
            ex_rows.append(tuple(ex_row))
        return IntervalMatrix(tuple(fa_rows)), IntervalMatrix(tuple(ex_rows))

    def permute(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "QIMatrix":
        return QIMatrix(
            self.base.permute(row_perm, col_perm),
            tuple(
                tuple(self.quants[i][j] for j in col_perm) for i in row_perm
            ),
        )


def split(q: QIMatrix) -> tuple[IntervalMatrix, IntervalMatrix]:
    return q.split()


def random_member(
    m: IntervalMatrix, rng: random.Random, denominator: int = 64
) -> RationalMatrix:
    """Random member with exact rational entries.

    Each entry is lo + (k/denominator)*(hi - lo) for a uniform integer k,
    so the sample is a rational convex combination of the endpoints.
    """
    grid = []
    for r in m.entries:
        row = []
        for e in r:
            w = Fraction(rng.randint(0, denominator), denominator)
            row.append(e.lo + w * (e.hi - e.lo))
        grid.append(row)
    return RationalMatrix.from_rows(grid)


def single_column_form(
    rows: int, cols: int, marked: Sequence[Position]
) -> tuple[tuple[int, ...], tuple[int, ...], int]:
    """Permutations putting all marked positions into a trailing column block.

    Returns (row_perm, col_perm, k) such that after applying the permutations
    the marked entries occupy rows 0..k-1 of the last column.  Raises
    ShapeMismatchError when the marks are empty or span several columns.
    Perms map new index -> old index.
    """
    if not marked:
        raise ShapeMismatchError("no marked entries: shape requires at least one")
    mark_cols = {j for _, j in marked}
    if len(mark_cols) != 1:
        raise ShapeMismatchError(f"marked entries span columns {sorted(mark_cols)}")
    col = mark_cols.pop()
    mark_rows = [i for i, _ in marked]
    if len(set(mark_rows)) != len(mark_rows):
        raise ShapeMismatchError("duplicate marked positions")
    other_rows = [i for i in range(rows) if i not in set(mark_rows)]
    row_perm = tuple(mark_rows + other_rows)
    col_perm = tuple([j for j in range(cols) if j != col] + [col])
    return row_perm, col_perm, len(mark_rows)


def invert_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for new, old in enumerate(perm):
        inv[old] = new
    return tuple(inv)
