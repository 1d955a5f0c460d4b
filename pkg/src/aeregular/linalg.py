"""Exact dense linear algebra over rationals.

Everything in this module computes with `fractions.Fraction`; there is no
floating point anywhere and therefore no rounding.  Determinants use
fraction-free (Bareiss) elimination after clearing denominators row by row,
so intermediate integers stay polynomially bounded.  Linear feasibility is
decided by a phase-1 simplex with Bland's rule, which terminates on every
input.  Problem sizes throughout the package are tiny (n <= ~12), so clarity
wins over constant factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import ShapeMismatchError

Vector = tuple[Fraction, ...]


def as_fraction(x) -> Fraction:
    """Coerce ints, strings like '3/4' or '0.8', and Fractions exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a string or Fraction")
    return Fraction(x)


def as_vector(xs: Iterable) -> Vector:
    return tuple(as_fraction(x) for x in xs)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ShapeMismatchError(f"dot: lengths {len(u)} != {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable dense matrix of exact rationals."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise ShapeMismatchError("matrix must have at least one row and column")
        width = len(self.entries[0])
        if any(len(r) != width for r in self.entries):
            raise ShapeMismatchError("ragged rows")

    @staticmethod
    def from_rows(rows: Iterable[Iterable]) -> "RationalMatrix":
        return RationalMatrix(tuple(tuple(as_fraction(x) for x in r) for r in rows))

    @staticmethod
    def identity(n: int) -> "RationalMatrix":
        return RationalMatrix.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def zeros(m: int, n: int) -> "RationalMatrix":
        return RationalMatrix.from_rows([[0] * n for _ in range(m)])

    @staticmethod
    def diagonal(values: Iterable) -> "RationalMatrix":
        vals = as_vector(values)
        n = len(vals)
        return RationalMatrix.from_rows(
            [[vals[i] if i == j else 0 for j in range(n)] for i in range(n)]
        )

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.entries)))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix(
            tuple(tuple(self.entries[i][j] for j in cols) for i in rows)
        )

    def _same_shape(self, other: "RationalMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatchError(
                f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    def with_entry(self, i: int, j: int, value) -> "RationalMatrix":
        v = as_fraction(value)
        return RationalMatrix(
            tuple(
                tuple(v if (r, c) == (i, j) else self.entries[r][c] for c in range(self.cols))
                for r in range(self.rows)
            )
        )

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix(
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries))
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix(
            tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries))
        )

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(tuple(tuple(-a for a in r) for r in self.entries))

    def scale(self, c) -> "RationalMatrix":
        f = as_fraction(c)
        return RationalMatrix(tuple(tuple(f * a for a in r) for r in self.entries))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ShapeMismatchError(f"matmul: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols = other.transpose().entries
        return RationalMatrix(
            tuple(tuple(dot(r, c) for c in cols) for r in self.entries)
        )

    def apply(self, x: Sequence[Fraction]) -> Vector:
        """Matrix-vector product."""
        if len(x) != self.cols:
            raise ShapeMismatchError(f"apply: {self.cols} columns vs vector of length {len(x)}")
        return tuple(dot(r, x) for r in self.entries)

    def is_nonnegative(self) -> bool:
        return all(a >= 0 for r in self.entries for a in r)

    def __str__(self) -> str:
        return "\n".join(" ".join(str(a) for a in r) for r in self.entries)


def hstack(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    if a.rows != b.rows:
        raise ShapeMismatchError("hstack: row counts differ")
    return RationalMatrix(tuple(ra + rb for ra, rb in zip(a.entries, b.entries)))


def vstack(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    if a.cols != b.cols:
        raise ShapeMismatchError("vstack: column counts differ")
    return RationalMatrix(a.entries + b.entries)


# ---------------------------------------------------------------------------
# Determinant, rank, inverse, kernel
# ---------------------------------------------------------------------------


def _int_bareiss_det(m: list[list[int]]) -> int:
    """Fraction-free elimination; `m` is consumed."""
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def determinant(a: RationalMatrix) -> Fraction:
    """Exact determinant via Bareiss elimination on a denominator-cleared copy."""
    if not a.is_square:
        raise ShapeMismatchError("determinant requires a square matrix")
    scaled: list[list[int]] = []
    denom = 1
    for row in a.entries:
        d = lcm(*(f.denominator for f in row))
        denom *= d
        scaled.append([int(f * d) for f in row])
    return Fraction(_int_bareiss_det(scaled), denom)


def _rref(a: RationalMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    m = [list(r) for r in a.entries]
    nrows, ncols = a.rows, a.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(a: RationalMatrix) -> int:
    return len(_rref(a)[1])


def inverse(a: RationalMatrix) -> RationalMatrix | None:
    """Exact inverse, or None when the matrix is singular."""
    if not a.is_square:
        raise ShapeMismatchError("inverse requires a square matrix")
    n = a.rows
    aug = RationalMatrix(
        tuple(a.entries[i] + RationalMatrix.identity(n).entries[i] for i in range(n))
    )
    m, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        return None
    return RationalMatrix(tuple(tuple(m[i][n:]) for i in range(n)))


def null_space_vector(a: RationalMatrix) -> Vector | None:
    """One nonzero kernel vector of `a`, or None when the kernel is trivial."""
    m, pivots = _rref(a)
    free = [c for c in range(a.cols) if c not in pivots]
    if not free:
        return None
    f = free[0]
    x = [Fraction(0)] * a.cols
    x[f] = Fraction(1)
    for r, pc in enumerate(pivots):
        x[pc] = -m[r][f]
    return tuple(x)


# ---------------------------------------------------------------------------
# Exact linear feasibility (phase-1 simplex, Bland's rule)
# ---------------------------------------------------------------------------


def feasible_nonneg(
    lhs: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> Vector | None:
    """Decide whether some y >= 0 satisfies lhs @ y >= rhs entrywise.

    Returns an exact witness vector, or None when infeasible.  Rows with
    nonpositive right-hand side start feasible through their slack; the rest
    get an artificial variable whose sum is driven to zero.  Bland's rule on
    both the entering and the leaving choice rules out cycling.
    """
    m = len(rhs)
    if m == 0:
        return ()
    n = len(lhs[0]) if lhs else 0
    if any(len(r) != n for r in lhs):
        raise ShapeMismatchError("feasible_nonneg: ragged constraint rows")
    if n == 0:
        return () if all(b <= 0 for b in rhs) else None

    # Equalities lhs.y - s = rhs with s >= 0; rows are sign-flipped when
    # rhs < 0 so every basic value starts nonnegative.
    n_art = sum(1 for b in rhs if b > 0)
    width = n + m + n_art
    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    art_index = n + m
    art_cols: set[int] = set()
    for i in range(m):
        row = [Fraction(0)] * (width + 1)
        if rhs[i] > 0:
            for j in range(n):
                row[j] = Fraction(lhs[i][j])
            row[n + i] = Fraction(-1)
            row[art_index] = Fraction(1)
            row[width] = Fraction(rhs[i])
            basis.append(art_index)
            art_cols.add(art_index)
            art_index += 1
        else:
            for j in range(n):
                row[j] = Fraction(-lhs[i][j])
            row[n + i] = Fraction(1)
            row[width] = Fraction(-rhs[i])
            basis.append(n + i)
        tableau.append(row)

    def artificial_load() -> Fraction:
        return sum(
            (tableau[i][width] for i in range(m) if basis[i] in art_cols), Fraction(0)
        )

    while artificial_load() > 0:
        art_rows = [i for i in range(m) if basis[i] in art_cols]
        entering = None
        for j in range(n + m):  # never re-enter artificial columns
            red = sum((tableau[i][j] for i in art_rows), Fraction(0))
            if red > 0:
                entering = j
                break
        if entering is None:
            return None  # optimum of phase-1 is positive: infeasible
        # Ratio test; Bland tie-break on the smallest leaving basis index.
        leave = None
        best: Fraction | None = None
        for i in range(m):
            coef = tableau[i][entering]
            if coef > 0:
                ratio = tableau[i][width] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        assert leave is not None, "phase-1 objective cannot be unbounded"
        piv = tableau[leave][entering]
        tableau[leave] = [x / piv for x in tableau[leave]]
        for i in range(m):
            if i != leave and tableau[i][entering] != 0:
                f = tableau[i][entering]
                tableau[i] = [x - f * y for x, y in zip(tableau[i], tableau[leave])]
        basis[leave] = entering

    y = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            y[basis[i]] = tableau[i][width]
    witness = tuple(y)
    assert all(v >= 0 for v in witness)
    assert all(dot(lhs[i], witness) >= rhs[i] for i in range(m))
    return witness


def feasible_positive(a: RationalMatrix) -> Vector | None:
    """Find x > 0 with a @ x > 0, or None when no such vector exists.

    The strict system is equivalent to {x >= 1, a.x >= 1}: any strict
    solution satisfies it after scaling, and any solution of it is strict.
    Substituting x = u + 1 with u >= 0 reduces it to plain nonnegative
    feasibility.
    """
    if not a.is_square:
        raise ShapeMismatchError("feasible_positive requires a square matrix")
    n = a.rows
    ones = (Fraction(1),) * n
    rhs = tuple(Fraction(1) - s for s in a.apply(ones))
    u = feasible_nonneg(a.entries, rhs)
    if u is None:
        return None
    x = tuple(v + 1 for v in u)
    assert all(v >= 1 for v in x)
    assert all(s >= 1 for s in a.apply(x))
    return x
