"""Recognizers for M-matrices, H-matrices, inverse-nonnegative matrices, and
their weak / strong / forall-exists interval generalizations.

Each interval-level recognizer reduces to a single real test matrix built
from entrywise extremal values; the reductions are exact characterizations
(weak and AE M/H classes) or an exact endpoint characterization (strong
inverse nonnegativity).  AE inverse nonnegativity has no known
characterization, so only a quantifier-reversal sufficient condition with a
finite candidate search is offered.

The real M-matrix test is the definitional one: nonpositive off-diagonal
entries plus a positive vector v with A v > 0, decided by exact LP.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .core import IntervalMatrix, QIMatrix, VertexIndex, comparison_matrix, vertex_matrix
from .errors import BudgetExceededError, ShapeMismatchError
from .linalg import RationalMatrix, Vector, feasible_positive, inverse


@dataclass(frozen=True)
class ClassWitness:
    """Realizations backing a positive verdict; everything re-verifies exactly."""

    kind: str
    matrices: Mapping[str, RationalMatrix] = field(default_factory=dict)
    vector: Vector | None = None


@dataclass(frozen=True)
class ClassCheck:
    holds: bool
    witness: ClassWitness | None = None

    def __bool__(self) -> bool:
        return self.holds


def _require_square(a) -> None:
    if not a.is_square:
        raise ShapeMismatchError("matrix class tests require a square matrix")


def is_m_matrix(a: RationalMatrix) -> ClassCheck:
    """Nonpositive off-diagonal entries and some v > 0 with A v > 0."""
    _require_square(a)
    n = a.rows
    if any(a[i, j] > 0 for i in range(n) for j in range(n) if i != j):
        return ClassCheck(False)
    v = feasible_positive(a)
    if v is None:
        return ClassCheck(False)
    return ClassCheck(True, ClassWitness("m-matrix", {"matrix": a}, v))


def is_h_matrix(a: RationalMatrix) -> ClassCheck:
    """The comparison matrix (diagonal |.|, off-diagonal -|.|) is an M-matrix."""
    _require_square(a)
    comp = comparison_matrix(a)
    inner = is_m_matrix(comp)
    if not inner:
        return ClassCheck(False)
    return ClassCheck(
        True, ClassWitness("h-matrix", {"matrix": a, "comparison": comp}, inner.witness.vector)
    )


def is_inverse_nonnegative(a: RationalMatrix) -> bool:
    """Nonsingular with entrywise nonnegative inverse."""
    _require_square(a)
    inv = inverse(a)
    return inv is not None and inv.is_nonnegative()


# ---------------------------------------------------------------------------
# Weak classes: does some member belong to the class?
# ---------------------------------------------------------------------------


def weak_m_candidate(m: IntervalMatrix) -> RationalMatrix:
    """The one member whose M-matrix property decides weak membership.

    Diagonal entries take their upper endpoints; off-diagonal entries take
    the interval point of minimal absolute value (zero whenever the interval
    straddles zero, otherwise the endpoint nearer zero).  No tie-breaking is
    needed off the diagonal: |lo| = |hi| with 0 not inside forces lo = -hi,
    which puts 0 inside after all, a contradiction.
    """
    _require_square(m)
    n = m.rows
    return RationalMatrix.from_rows(
        [
            [
                m.entries[i][j].hi if i == j else m.entries[i][j].nearest_to_zero
                for j in range(n)
            ]
            for i in range(n)
        ]
    )


def weak_m_matrix(m: IntervalMatrix) -> ClassCheck:
    """Does some member of `m` qualify as an M-matrix?

    The candidate member dominates every other member that could qualify:
    raising the diagonal and shrinking off-diagonal magnitudes preserves both
    the sign pattern and the positive vector, so testing it alone is a
    complete characterization.
    """
    cand = weak_m_candidate(m)
    inner = is_m_matrix(cand)
    if not inner:
        return ClassCheck(False)
    return ClassCheck(
        True, ClassWitness("weak-m-matrix", {"member": cand}, inner.witness.vector)
    )


def weak_h_candidate(m: IntervalMatrix) -> RationalMatrix:
    """Comparison-style test matrix: diagonal magnitudes, minus off-diagonal mignitudes."""
    _require_square(m)
    n = m.rows
    return RationalMatrix.from_rows(
        [
            [m.entries[i][j].mag if i == j else -m.entries[i][j].mig for j in range(n)]
            for i in range(n)
        ]
    )


def weak_h_member(m: IntervalMatrix) -> RationalMatrix:
    """A member attaining the weak-H test matrix as its comparison matrix."""
    n = m.rows
    return RationalMatrix.from_rows(
        [
            [
                m.entries[i][j].farthest_from_zero
                if i == j
                else m.entries[i][j].nearest_to_zero
                for j in range(n)
            ]
            for i in range(n)
        ]
    )


def weak_h_matrix(m: IntervalMatrix) -> ClassCheck:
    """Does some member of `m` qualify as an H-matrix?"""
    cand = weak_h_candidate(m)
    inner = is_m_matrix(cand)
    if not inner:
        return ClassCheck(False)
    return ClassCheck(
        True,
        ClassWitness(
            "weak-h-matrix",
            {"test_matrix": cand, "member": weak_h_member(m)},
            inner.witness.vector,
        ),
    )


# ---------------------------------------------------------------------------
# AE classes: for every universal realization some existential one qualifies
# ---------------------------------------------------------------------------


def ae_m_matrix(q: QIMatrix) -> ClassCheck:
    """AE M-matrix test.

    Build the weak-M candidate of (lower universal part + existential part);
    membership additionally needs every off-diagonal entry to stay
    nonpositive at the upper universal bound, i.e. candidate + 2*radius of
    the universal part must be nonpositive off the diagonal.  The fixed
    existential realization extracted from the candidate then works for every
    universal realization.
    """
    _require_square(q)
    fa, ex = q.split()
    n = q.rows
    base_low = IntervalMatrix.from_point(fa.lower()) + ex
    cand = weak_m_candidate(base_low)
    two_rad = fa.radius().scale(2)
    ceiling = cand + two_rad
    if any(ceiling[i, j] > 0 for i in range(n) for j in range(n) if i != j):
        return ClassCheck(False)
    inner = is_m_matrix(cand)
    if not inner:
        return ClassCheck(False)
    exists_choice = cand - fa.lower()
    return ClassCheck(
        True,
        ClassWitness(
            "ae-m-matrix",
            {"test_matrix": cand, "exists_realization": exists_choice},
            inner.witness.vector,
        ),
    )


def ae_h_candidate(q: QIMatrix) -> RationalMatrix:
    """Entrywise worst-case comparison bound under forall/exists play.

    Diagonal: mignitude of the universal part plus magnitude of the
    existential part.  Off-diagonal: minus magnitude of the universal part
    minus mignitude of the existential part.  The missing part of each entry
    is the degenerate zero (the split is disjoint), contributing nothing.
    """
    _require_square(q)
    fa, ex = q.split()
    n = q.rows
    grid = []
    for i in range(n):
        row = []
        for j in range(n):
            u, e = fa.entries[i][j], ex.entries[i][j]
            if i == j:
                row.append(u.mig + e.mag)
            else:
                row.append(-u.mag - e.mig)
        grid.append(row)
    return RationalMatrix.from_rows(grid)


def ae_h_matrix(q: QIMatrix) -> ClassCheck:
    """AE H-matrix test: the worst-case comparison bound is an M-matrix."""
    cand = ae_h_candidate(q)
    inner = is_m_matrix(cand)
    if not inner:
        return ClassCheck(False)
    _, ex = q.split()
    exists_choice = RationalMatrix.from_rows(
        [
            [
                ex.entries[i][j].farthest_from_zero
                if i == j
                else ex.entries[i][j].nearest_to_zero
                for j in range(q.cols)
            ]
            for i in range(q.rows)
        ]
    )
    return ClassCheck(
        True,
        ClassWitness(
            "ae-h-matrix",
            {"test_matrix": cand, "exists_realization": exists_choice},
            inner.witness.vector,
        ),
    )


# ---------------------------------------------------------------------------
# Inverse nonnegativity
# ---------------------------------------------------------------------------


def strong_inverse_nonnegative(m: IntervalMatrix) -> bool:
    """Every member inverse nonnegative; holds iff both bound matrices are."""
    _require_square(m)
    return is_inverse_nonnegative(m.lower()) and is_inverse_nonnegative(m.upper())


def ae_inverse_nonnegative_sufficient(
    q: QIMatrix, strategy: str = "all", budget: int = 1 << 20
) -> RationalMatrix | None:
    """Quantifier-reversal sufficient condition for AE inverse nonnegativity.

    Searches a finite candidate set of existential realizations (midpoint
    and/or existential vertex matrices, in that order) for one that keeps
    both universal bound matrices inverse nonnegative after the shift.  A
    None result proves nothing: the condition is sufficient only.
    """
    _require_square(q)
    if strategy not in ("all", "midpoint", "vertices"):
        raise ValueError(f"unknown strategy {strategy!r}")
    fa, ex = q.split()
    candidates: list[RationalMatrix] = []
    if strategy in ("all", "midpoint"):
        candidates.append(ex.midpoint())
    if strategy in ("all", "vertices"):
        width = len(ex.nondegenerate_positions())
        if (1 << width) > budget:
            raise BudgetExceededError(
                f"existential vertex scan of 2^{width} exceeds budget {budget}"
            )
        for bits in range(1 << width):
            candidates.append(vertex_matrix(ex, VertexIndex(width, bits)))
    seen: set = set()
    for cand in candidates:
        if cand.entries in seen:
            continue
        seen.add(cand.entries)
        lo_shift = fa.lower() + cand
        hi_shift = fa.upper() + cand
        if is_inverse_nonnegative(lo_shift) and is_inverse_nonnegative(hi_shift):
            return cand
    return None
