"""Deciders for strong singularity (every member singular).

Strong singularity reduces to singularity of every vertex matrix because the
determinant is affine in each entry, so its extreme values over the box are
attained at endpoint assignments.  The decider therefore sweeps the vertex
set and short-circuits at the first nonsingular vertex; the sweep order is
the integer order of vertex indices, which makes witnesses reproducible.

A quick necessary-condition filter on the radius matrix, fixture generators
for strongly singular matrices, and an exhaustive searcher for real
submatrices with prescribed rank deficiency (the conjectured combinatorial
certificate) live here as well.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations

from .core import (
    Interval,
    IntervalMatrix,
    VertexIndex,
    single_column_form,
    vertex_matrix,
)
from .errors import ShapeMismatchError
from .linalg import RationalMatrix, determinant, rank

DEFAULT_VERTEX_BUDGET = 1 << 20


class SingularityStatus(Enum):
    STRONGLY_SINGULAR = "strongly_singular"
    NOT_STRONGLY_SINGULAR = "not_strongly_singular"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class StrongSingularityResult:
    status: SingularityStatus
    witness_vertex: VertexIndex | None = None
    witness_matrix: RationalMatrix | None = None
    witness_determinant: Fraction | None = None
    vertices_checked: int = 0

    @property
    def is_strongly_singular(self) -> bool:
        return self.status is SingularityStatus.STRONGLY_SINGULAR

    @property
    def conclusive(self) -> bool:
        return self.status is not SingularityStatus.BUDGET_EXCEEDED


def is_strongly_singular(
    m: IntervalMatrix, budget: int = DEFAULT_VERTEX_BUDGET
) -> StrongSingularityResult:
    """Decide whether every member of `m` is singular.

    Enumerates vertex matrices in index order and stops at the first one with
    a nonzero determinant, which is returned as an exact nonsingular witness.
    Returns BUDGET_EXCEEDED without deciding when 2^(#nondegenerate) > budget.
    """
    if not m.is_square:
        raise ShapeMismatchError("strong singularity is defined for square matrices")
    width = len(m.nondegenerate_positions())
    count = 1 << width
    if count > budget:
        return StrongSingularityResult(SingularityStatus.BUDGET_EXCEEDED)
    for bits in range(count):
        v = VertexIndex(width, bits)
        a = vertex_matrix(m, v)
        d = determinant(a)
        if d != 0:
            return StrongSingularityResult(
                SingularityStatus.NOT_STRONGLY_SINGULAR,
                witness_vertex=v,
                witness_matrix=a,
                witness_determinant=d,
                vertices_checked=bits + 1,
            )
    return StrongSingularityResult(
        SingularityStatus.STRONGLY_SINGULAR, vertices_checked=count
    )


class RadiusFilter(Enum):
    MAYBE = "maybe"
    NOT_STRONGLY_SINGULAR = "not_strongly_singular"


def radius_filter(m: IntervalMatrix) -> RadiusFilter:
    """Cheap pre-check: a nonsingular radius matrix rules out strong singularity.

    Strong singularity forces the half-width matrix itself to be singular, so
    det(radius) != 0 certifies NOT_STRONGLY_SINGULAR; otherwise nothing is
    learned and the vertex sweep must run.
    """
    if not m.is_square:
        raise ShapeMismatchError("radius filter requires a square matrix")
    if determinant(m.radius()) != 0:
        return RadiusFilter.NOT_STRONGLY_SINGULAR
    return RadiusFilter.MAYBE


# ---------------------------------------------------------------------------
# Single-interval-column structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ColumnBlockForm:
    """Canonical split of a square matrix whose intervals sit in one column.

    After permuting the interval column last and its rows first, the matrix
    reads (B b; C c) with b the k nondegenerate entries and B, C, c real.
    """

    matrix: IntervalMatrix
    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    k: int


def column_block_form(m: IntervalMatrix) -> ColumnBlockForm:
    if not m.is_square:
        raise ShapeMismatchError("column block form requires a square matrix")
    marked = m.nondegenerate_positions()
    row_perm, col_perm, k = single_column_form(m.rows, m.cols, marked)
    return ColumnBlockForm(m.permute(row_perm, col_perm), row_perm, col_perm, k)


def structured_row_strong_singular(m: IntervalMatrix) -> bool:
    """Exact strong-singularity decision when all intervals share one column.

    With the matrix permuted to (B b; C c), every member is singular exactly
    when the stacked real block [B; C] is column rank deficient or the bottom
    real block (C c) is row rank deficient.  The interval column b never
    enters a rank computation: its positive radii are what make the
    characterization work.
    """
    form = column_block_form(m)
    n = form.matrix.rows
    k = form.k
    p = form.matrix.lower()  # all remaining entries are degenerate
    if n > 1:
        side = p.submatrix(range(n), range(n - 1))
        if rank(side) < n - 1:
            return True
    if k < n:
        bottom = p.submatrix(range(k, n), range(n))
        if rank(bottom) < n - k:
            return True
    return False


# ---------------------------------------------------------------------------
# Fixture generators
# ---------------------------------------------------------------------------

GENERATOR_KINDS = ("zero-row", "rank-deficient-block", "point-singular")


def _random_interval(rng: random.Random, span: int = 3) -> Interval:
    a = Fraction(rng.randint(-2 * span, 2 * span), rng.choice((1, 2)))
    if rng.random() < 0.5:
        return Interval.point(a)
    b = a + Fraction(rng.randint(1, span), rng.choice((1, 2)))
    return Interval(a, b)


def _random_rank_deficient(rng: random.Random, rows: int, cols: int) -> RationalMatrix:
    """Random integer matrix of rank < min(rows, cols) via a thin product."""
    r = max(min(rows, cols) - 1, 0)
    if r == 0:
        return RationalMatrix.zeros(rows, cols)
    left = [[rng.randint(-3, 3) for _ in range(r)] for _ in range(rows)]
    right = [[rng.randint(-3, 3) for _ in range(cols)] for _ in range(r)]
    return RationalMatrix.from_rows(left) @ RationalMatrix.from_rows(right)


def generate_strongly_singular(
    n: int, seed: int, kind: str = "zero-row"
) -> IntervalMatrix:
    """Strongly singular n-by-n fixture of the requested kind.

    zero-row: one row is identically the degenerate zero.
    rank-deficient-block: intervals confined to one column with a rank
        deficiency planted in the real blocks (needs n >= 2).
    point-singular: degenerate hull of a random singular real matrix.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if kind not in GENERATOR_KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {GENERATOR_KINDS}")
    rng = random.Random(seed)
    if kind == "zero-row":
        dead = rng.randrange(n)
        rows = [
            [Interval.point(0) if i == dead else _random_interval(rng) for _ in range(n)]
            for i in range(n)
        ]
        return IntervalMatrix(tuple(tuple(r) for r in rows))
    if kind == "point-singular":
        return IntervalMatrix.from_point(_random_rank_deficient(rng, n, n))
    if n < 2:
        raise ValueError("rank-deficient-block needs n >= 2")
    k = rng.randint(1, n - 1)
    if rng.random() < 0.5:
        # bottom block (C c), rows k..n-1 over all n columns, row rank deficient
        bottom = _random_rank_deficient(rng, n - k, n)
        top_left = [[Fraction(rng.randint(-3, 3)) for _ in range(n - 1)] for _ in range(k)]
        rows = []
        for i in range(k):
            b_i = _random_interval(rng)
            if b_i.is_degenerate:
                b_i = Interval(b_i.lo, b_i.lo + 1)
            rows.append([Interval.point(x) for x in top_left[i]] + [b_i])
        for i in range(n - k):
            rows.append([Interval.point(x) for x in bottom.entries[i]])
    else:
        # stacked block [B; C], all n rows over the first n-1 columns,
        # column rank deficient
        side = _random_rank_deficient(rng, n, n - 1)
        rows = []
        for i in range(n):
            cells = [Interval.point(x) for x in side.entries[i]]
            if i < k:
                b_i = _random_interval(rng)
                if b_i.is_degenerate:
                    b_i = Interval(b_i.lo, b_i.lo + 1)
                cells.append(b_i)
            else:
                cells.append(Interval.point(rng.randint(-3, 3)))
            rows.append(cells)
    return IntervalMatrix(tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------------------
# Real-submatrix rank certificate search (conjecture 1)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubmatrixWitness:
    row_set: tuple[int, ...]
    col_set: tuple[int, ...]
    rank: int

    @property
    def k(self) -> int:
        return len(self.row_set)

    @property
    def ell(self) -> int:
        return len(self.col_set)


def conjecture1_witness(m: IntervalMatrix) -> SubmatrixWitness | None:
    """First all-degenerate k-by-l submatrix with rank exactly k + l - n - 1.

    Exhaustively scans nonempty row and column subsets in lexicographic order
    (smaller sizes first).  Subsets whose rank target is negative are skipped:
    an empty or negative-target block certifies nothing.  This search is
    exploratory evidence for the conjectured characterization of strong
    singularity; it is never used as a decider.
    """
    if not m.is_square:
        raise ShapeMismatchError("submatrix witness search requires a square matrix")
    n = m.rows
    degenerate = [[m.entries[i][j].is_degenerate for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        for ell in range(1, n + 1):
            target = k + ell - n - 1
            if target < 0 or target > min(k, ell):
                continue
            for row_set in combinations(range(n), k):
                if not all(any(degenerate[i]) for i in row_set):
                    continue
                for col_set in combinations(range(n), ell):
                    if not all(degenerate[i][j] for i in row_set for j in col_set):
                        continue
                    sub = m.lower().submatrix(row_set, col_set)
                    if rank(sub) == target:
                        return SubmatrixWitness(row_set, col_set, target)
    return None
