"""Strong full rank of interval matrices and the structured regularity
deciders for quantifiers confined to one column block.

An m-by-k interval matrix (m >= k) has strongly full column rank when every
member has rank k.  Some member is rank deficient exactly when a nonzero x
solves |center.x| <= halfwidth.|x|; restricting x to an orthant via a sign
pattern makes that a linear feasibility problem, so 2^k exact LPs decide the
property.  A feasible x is turned into an exact member-and-kernel witness by
tilting each row of the center within its radius.

On top of the rank test sit the exact characterizations of AE regularity for
matrices whose existential intervals fill a single column segment, or whole
columns of everywhere-positive radius.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    IntervalMatrix,
    QIMatrix,
    Quantifier,
    single_column_form,
)
from .errors import ShapeMismatchError
from .linalg import RationalMatrix, Vector, feasible_nonneg


@dataclass(frozen=True)
class FullRankResult:
    full_rank: bool
    witness_member: RationalMatrix | None = None
    witness_vector: Vector | None = None
    sign_pattern: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.full_rank


def strongly_full_column_rank(m: IntervalMatrix) -> FullRankResult:
    """Does every member of the m-by-k interval matrix have rank k?

    For each sign pattern s the system  y >= 0, sum(y) >= 1,
    (halfwidth - center.diag(s)).y >= 0, (halfwidth + center.diag(s)).y >= 0
    is solvable exactly when some member annihilates a nonzero x = diag(s).y
    in that orthant.  When a pattern is feasible, the returned witness pair
    (member, x) satisfies member @ x = 0 exactly.
    """
    if m.rows < m.cols:
        raise ShapeMismatchError(
            f"column rank test needs rows >= cols, got {m.rows}x{m.cols}"
        )
    center = m.midpoint()
    half = m.radius()
    nrows, k = m.rows, m.cols
    one = Fraction(1)
    for pattern in range(1 << k):
        s = tuple(-1 if pattern >> i & 1 else 1 for i in range(k))
        lhs: list[list[Fraction]] = []
        rhs: list[Fraction] = []
        for i in range(nrows):
            minus = [half[i, j] - center[i, j] * s[j] for j in range(k)]
            plus = [half[i, j] + center[i, j] * s[j] for j in range(k)]
            lhs.append(minus)
            rhs.append(Fraction(0))
            lhs.append(plus)
            rhs.append(Fraction(0))
        lhs.append([one] * k)
        rhs.append(one)
        y = feasible_nonneg(lhs, rhs)
        if y is None:
            continue
        x = tuple(s[j] * y[j] for j in range(k))
        member = _annihilating_member(m, x, s)
        assert all(v == 0 for v in member.apply(x))
        assert m.contains(member)
        return FullRankResult(False, member, x, s)
    return FullRankResult(True)


def _annihilating_member(
    m: IntervalMatrix, x: Vector, s: tuple[int, ...]
) -> RationalMatrix:
    """Member of `m` whose product with x vanishes, given |center.x| <= half.|x|.

    Row i of the center is tilted by the fraction residual/row-budget of its
    radius row, signed against x, which cancels the residual exactly and
    never leaves the interval.
    """
    center = m.midpoint()
    half = m.radius()
    rows = []
    for i in range(m.rows):
        r = sum((center[i, j] * x[j] for j in range(m.cols)), Fraction(0))
        d = sum((half[i, j] * s[j] * x[j] for j in range(m.cols)), Fraction(0))
        if d == 0:
            assert r == 0
            rows.append([center[i, j] for j in range(m.cols)])
        else:
            t = r / d
            rows.append([center[i, j] - t * half[i, j] * s[j] for j in range(m.cols)])
    return RationalMatrix.from_rows(rows)


# ---------------------------------------------------------------------------
# Structured AE regularity: one existential column segment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExistsColumnForm:
    """Square matrix permuted so existential intervals fill rows 0..k-1 of the
    last column; everything else is universally quantified."""

    qim: QIMatrix
    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    k: int


def exists_column_form(q: QIMatrix) -> ExistsColumnForm:
    """Normalization pass: permute the existential column last, its rows first.

    Degenerate entries tagged existential are inert and stay wherever they
    are; only nondegenerate existential entries must share one column.
    """
    if not q.is_square:
        raise ShapeMismatchError("structured test requires a square matrix")
    marked = q.exists_positions()
    row_perm, col_perm, k = single_column_form(q.rows, q.cols, marked)
    return ExistsColumnForm(q.permute(row_perm, col_perm), row_perm, col_perm, k)


def matches_exists_column_shape(q: QIMatrix) -> bool:
    if not q.is_square:
        return False
    marked = q.exists_positions()
    return bool(marked) and len({j for _, j in marked}) == 1


@dataclass(frozen=True)
class StructuredDecision:
    ae_regular: bool
    failed_block: str | None = None
    rank_failure: FullRankResult | None = None
    form: ExistsColumnForm | None = None

    def __bool__(self) -> bool:
        return self.ae_regular


def structured_ae_regular_row(q: QIMatrix) -> StructuredDecision:
    """Exact AE-regularity decision for one existential column segment.

    In the permuted frame (B b; C c) with b existential of positive radius
    and B, C, c universal intervals, the matrix is AE regular exactly when
    the stacked side block [B; C] has strongly full column rank and the
    transposed bottom block (C c) does too (i.e. (C c) has strongly full row
    rank).  A failed block yields a rank witness from which a universal
    realization with an entirely singular existential extension can be
    assembled.
    """
    form = exists_column_form(q)
    n = form.qim.rows
    k = form.k
    base = form.qim.base
    if n > 1:
        side = base.submatrix(range(n), range(n - 1))
        res = strongly_full_column_rank(side)
        if not res:
            return StructuredDecision(False, "side", res, form)
    if k < n:
        bottom = base.submatrix(range(k, n), range(n))
        res = strongly_full_column_rank(bottom.transpose())
        if not res:
            return StructuredDecision(False, "bottom", res, form)
    return StructuredDecision(True, form=form)


def structured_ae_regular_columns(
    b_forall: IntervalMatrix, c_exists: IntervalMatrix
) -> StructuredDecision:
    """Exact AE regularity for (universal block | existential block) columns.

    Requires every entry of the existential block to have positive radius;
    then the whole matrix is AE regular exactly when the universal block has
    strongly full column rank.
    """
    if b_forall.rows != c_exists.rows:
        raise ShapeMismatchError("blocks must have the same number of rows")
    n = b_forall.rows
    if b_forall.cols + c_exists.cols != n:
        raise ShapeMismatchError("blocks must assemble to a square matrix")
    if any(e.is_degenerate for row in c_exists.entries for e in row):
        raise ValueError("existential block must have positive radius everywhere")
    res = strongly_full_column_rank(b_forall)
    if not res:
        return StructuredDecision(False, "universal-block", res)
    return StructuredDecision(True)


def column_block_partition(q: QIMatrix) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Partition columns into (universal, full-existential) for the column test.

    Returns None unless at least one column is existential with positive
    radius in every entry, the remaining columns carry no existential
    intervals, and at least one universal column remains.
    """
    if not q.is_square:
        return None
    exists_cols = []
    forall_cols = []
    for j in range(q.cols):
        tags = [q.effective_quantifier(i, j) for i in range(q.rows)]
        if all(t is Quantifier.EXISTS for t in tags):
            exists_cols.append(j)
        elif any(t is Quantifier.EXISTS for t in tags):
            return None
        else:
            forall_cols.append(j)
    if not exists_cols or not forall_cols:
        return None
    return tuple(forall_cols), tuple(exists_cols)
