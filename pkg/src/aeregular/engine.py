"""Top-level forall/exists regularity verdicts.

The pipeline tries, in order: the quantifier-degenerate exact deciders (no
existential intervals -> classical regularity by determinant signs; no
universal intervals -> negated strong singularity), the AE M-/H-matrix
recognizers, the structured one-column characterizations, and finally a
numerical falsifier that hunts for a universal realization whose existential
box is entirely singular.  Exact arithmetic draws every conclusion: the
falsifier only proposes candidates, and a candidate changes the verdict only
after an exact vertex sweep confirms it.  When nothing concludes, the verdict
is UNKNOWN; a failed search is never promoted to a positive answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Sequence

import numpy as np
from scipy.optimize import minimize

from .classes import ae_h_matrix, ae_m_matrix
from .core import (
    Interval,
    IntervalMatrix,
    QIMatrix,
    VertexIndex,
    sign_vertex_matrix,
    vertex_matrix,
)
from .errors import BudgetExceededError, ShapeMismatchError
from .intrank import (
    StructuredDecision,
    column_block_partition,
    matches_exists_column_shape,
    structured_ae_regular_columns,
    structured_ae_regular_row,
)
from .linalg import RationalMatrix, determinant
from .singularity import (
    DEFAULT_VERTEX_BUDGET,
    SingularityStatus,
    is_strongly_singular,
)


@dataclass(frozen=True)
class EngineConfig:
    vertex_budget: int = DEFAULT_VERTEX_BUDGET
    starts: int = 32
    iterations: int = 500
    seed: int = 0
    residual_tol: float = 1e-9
    snap_denominators: tuple[int, ...] = (1, 2, 4, 16, 1000, 10**6)


class VerdictStatus(Enum):
    AE_REGULAR = "AE_REGULAR"
    NOT_AE_REGULAR = "NOT_AE_REGULAR"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class Verdict:
    status: VerdictStatus
    method: str | None = None
    certificate: dict[str, Any] = field(default_factory=dict)
    diagnostics: dict[str, Any] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Classical regularity (no existential intervals)
# ---------------------------------------------------------------------------


class RegularityStatus(Enum):
    REGULAR = "regular"
    NOT_REGULAR = "not_regular"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class ClassicalRegularityResult:
    status: RegularityStatus
    witness_singular: RationalMatrix | None = None
    determinant_sign: int | None = None
    checked: int = 0

    @property
    def is_regular(self) -> bool:
        return self.status is RegularityStatus.REGULAR

    @property
    def conclusive(self) -> bool:
        return self.status is not RegularityStatus.BUDGET_EXCEEDED


def _signs(index: int, n: int) -> tuple[int, ...]:
    return tuple(-1 if index >> i & 1 else 1 for i in range(n))


def _rational_singular_between(
    m: IntervalMatrix, pos: RationalMatrix, neg: RationalMatrix
) -> RationalMatrix:
    """Exact singular member of `m` on an entrywise path from pos to neg.

    Entries are moved one at a time; the determinant is affine in a single
    entry, so the first sign change pins a rational root inside the entry's
    interval.  Requires det(pos) > 0 > det(neg).
    """
    current = pos
    d_cur = determinant(current)
    assert d_cur > 0 and determinant(neg) < 0
    for i in range(m.rows):
        for j in range(m.cols):
            if current[i, j] == neg[i, j]:
                continue
            stepped = current.with_entry(i, j, neg[i, j])
            d_step = determinant(stepped)
            if d_step == 0:
                return stepped
            if (d_step > 0) != (d_cur > 0):
                t0, t1 = current[i, j], neg[i, j]
                slope = (d_step - d_cur) / (t1 - t0)
                root = t0 - d_cur / slope
                witness = current.with_entry(i, j, root)
                assert determinant(witness) == 0
                assert root in m.entries[i][j]
                return witness
            current, d_cur = stepped, d_step
    raise AssertionError("sign change lost along the entrywise path")


def classical_regular(
    m: IntervalMatrix, budget: int = DEFAULT_VERTEX_BUDGET
) -> ClassicalRegularityResult:
    """Decide regularity (every member nonsingular) of an interval matrix.

    Regular exactly when the 4^n sign-pattern vertex determinants are nonzero
    and share one sign.  A zero determinant is its own witness; a sign change
    is refined to an exact rational singular member by an entrywise walk
    between the two vertices.
    """
    if not m.is_square:
        raise ShapeMismatchError("regularity is defined for square matrices")
    n = m.rows
    count = 1 << (2 * n)
    if count > budget:
        return ClassicalRegularityResult(RegularityStatus.BUDGET_EXCEEDED)
    first_pos: RationalMatrix | None = None
    first_neg: RationalMatrix | None = None
    checked = 0
    for iy in range(1 << n):
        y = _signs(iy, n)
        for iz in range(1 << n):
            z = _signs(iz, n)
            a = sign_vertex_matrix(m, y, z)
            d = determinant(a)
            checked += 1
            if d == 0:
                return ClassicalRegularityResult(
                    RegularityStatus.NOT_REGULAR, witness_singular=a, checked=checked
                )
            if d > 0 and first_pos is None:
                first_pos = a
            if d < 0 and first_neg is None:
                first_neg = a
            if first_pos is not None and first_neg is not None:
                witness = _rational_singular_between(m, first_pos, first_neg)
                return ClassicalRegularityResult(
                    RegularityStatus.NOT_REGULAR, witness_singular=witness, checked=checked
                )
    sign = 1 if first_pos is not None else -1
    return ClassicalRegularityResult(
        RegularityStatus.REGULAR, determinant_sign=sign, checked=checked
    )


# ---------------------------------------------------------------------------
# Witness verification (exact)
# ---------------------------------------------------------------------------


def exists_vertex_matrices(
    q: QIMatrix, budget: int = DEFAULT_VERTEX_BUDGET
) -> list[RationalMatrix]:
    """All endpoint realizations of the existential part (exact)."""
    _, ex = q.split()
    width = len(ex.nondegenerate_positions())
    if (1 << width) > budget:
        raise BudgetExceededError(
            f"existential vertex set 2^{width} exceeds budget {budget}"
        )
    return [vertex_matrix(ex, VertexIndex(width, bits)) for bits in range(1 << width)]


def verify_witness(
    q: QIMatrix, a_forall: RationalMatrix, budget: int = DEFAULT_VERTEX_BUDGET
) -> bool:
    """Confirm that a universal realization defeats every existential choice.

    True exactly when the shifted existential box is strongly singular, which
    the vertex sweep checks with rational determinants.  The candidate must
    lie inside the universal bounds.
    """
    fa, ex = q.split()
    if not fa.contains(a_forall):
        raise ValueError("candidate lies outside the universal bounds")
    shifted = ex.add_point(a_forall)
    res = is_strongly_singular(shifted, budget)
    if res.status is SingularityStatus.BUDGET_EXCEEDED:
        raise BudgetExceededError("verification exceeds the vertex budget")
    return res.is_strongly_singular


# ---------------------------------------------------------------------------
# Numerical falsifier
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FalsifierResult:
    found: bool
    witness: RationalMatrix | None = None
    start_index: int | None = None
    residual: float | None = None
    diagnostics: dict[str, Any] = field(default_factory=dict)


def _cofactor_stack(mats: np.ndarray) -> np.ndarray:
    """Cofactor matrices for a (V, n, n) stack."""
    v, n, _ = mats.shape
    if n == 1:
        return np.ones_like(mats)
    idx = np.arange(n)
    cof = np.empty_like(mats)
    for i in range(n):
        rows = np.delete(idx, i)
        sub = mats[:, rows, :]
        for j in range(n):
            cols = np.delete(idx, j)
            cof[:, i, j] = (-1.0) ** (i + j) * np.linalg.det(sub[:, :, cols])
    return cof


def _snap_into(x: float, bound: int, iv: Interval) -> Fraction:
    f = Fraction(x).limit_denominator(bound)
    return min(max(f, iv.lo), iv.hi)


def _affine_repair(
    cand: RationalMatrix,
    free_positions: Sequence[tuple[int, int]],
    fa: IntervalMatrix,
    ex_vertices: Sequence[RationalMatrix],
) -> RationalMatrix | None:
    """Try to zero every existential-vertex determinant by moving one entry.

    Each vertex determinant is affine in a single candidate entry, so exact
    evaluation at the entry's two endpoints yields its coefficients; a common
    in-bounds rational root repairs the candidate exactly.
    """
    for (i, j) in free_positions:
        iv = fa.entries[i][j]
        a, b = iv.lo, iv.hi
        coeffs: list[tuple[Fraction, Fraction]] = []
        for vtx in ex_vertices:
            da = determinant(cand.with_entry(i, j, a) + vtx)
            db = determinant(cand.with_entry(i, j, b) + vtx)
            slope = (db - da) / (b - a)
            coeffs.append((da - slope * a, slope))
        root: Fraction | None = None
        for alpha, beta in coeffs:
            if beta != 0:
                root = -alpha / beta
                break
        if root is None:
            if all(alpha == 0 for alpha, _ in coeffs):
                return cand
            continue
        if not (a <= root <= b):
            continue
        if all(alpha + beta * root == 0 for alpha, beta in coeffs):
            return cand.with_entry(i, j, root)
    return None


def falsify_ae_regular(q: QIMatrix, config: EngineConfig | None = None) -> FalsifierResult:
    """Search for a universal realization whose existential box is all singular.

    Minimizes the sum of squared existential-vertex determinants over the
    universal box with multi-start projected quasi-Newton descent in floating
    point.  Candidates below the residual tolerance are rationalized
    (denominator-laddered snapping, then a one-entry exact repair) and only
    an exact vertex-sweep confirmation counts.  A miss proves nothing.
    """
    cfg = config or EngineConfig()
    if not q.is_square:
        raise ShapeMismatchError("falsifier requires a square matrix")
    fa, ex = q.split()
    n = q.rows
    ex_vertices = exists_vertex_matrices(q, cfg.vertex_budget)
    free = fa.nondegenerate_positions()
    fixed = fa.lower()

    diag: dict[str, Any] = {
        "starts_run": 0,
        "best_residual": None,
        "exists_vertices": len(ex_vertices),
        "free_entries": len(free),
        "seed": cfg.seed,
        "residual_tol": cfg.residual_tol,
    }

    def attempt(candidate: RationalMatrix, start_index: int, residual: float) -> FalsifierResult | None:
        seen: set = set()
        snapped: list[RationalMatrix] = []
        for bound in cfg.snap_denominators:
            grid = [[x for x in row] for row in fixed.entries]
            for (i, j) in free:
                grid[i][j] = _snap_into(float(candidate[i, j]), bound, fa.entries[i][j])
            mat = RationalMatrix.from_rows(grid)
            if mat.entries in seen:
                continue
            seen.add(mat.entries)
            snapped.append(mat)
        for mat in snapped:
            if verify_witness(q, mat, cfg.vertex_budget):
                return FalsifierResult(True, mat, start_index, residual, dict(diag))
        if snapped:
            repaired = _affine_repair(snapped[-1], free, fa, ex_vertices)
            if repaired is not None and verify_witness(q, repaired, cfg.vertex_budget):
                return FalsifierResult(True, repaired, start_index, residual, dict(diag))
        return None

    if not free:
        candidate = fixed
        ok = verify_witness(q, candidate, cfg.vertex_budget)
        diag["starts_run"] = 1
        diag["best_residual"] = 0.0 if ok else None
        if ok:
            return FalsifierResult(True, candidate, 0, 0.0, dict(diag))
        return FalsifierResult(False, diagnostics=dict(diag))

    base = np.array([[float(x) for x in row] for row in fixed.entries])
    verts = np.stack(
        [np.array([[float(x) for x in row] for row in v.entries]) for v in ex_vertices]
    )
    lo = np.array([float(fa.entries[i][j].lo) for (i, j) in free])
    hi = np.array([float(fa.entries[i][j].hi) for (i, j) in free])
    rows_idx = np.array([i for (i, _) in free])
    cols_idx = np.array([j for (_, j) in free])

    def assemble(x: np.ndarray) -> np.ndarray:
        full = base.copy()
        full[rows_idx, cols_idx] = x
        return full[None, :, :] + verts

    def objective(x: np.ndarray) -> tuple[float, np.ndarray]:
        stack = assemble(x)
        dets = np.linalg.det(stack)
        cof = _cofactor_stack(stack)
        grad_full = 2.0 * np.einsum("v,vij->ij", dets, cof)
        return float(dets @ dets), grad_full[rows_idx, cols_idx]

    bounds = list(zip(lo, hi))
    mid = (lo + hi) / 2.0
    best_residual = np.inf
    for start in range(cfg.starts):
        if start == 0:
            x0 = mid
        else:
            rng = np.random.default_rng([cfg.seed, start])
            x0 = rng.uniform(lo, hi)
        sol = minimize(
            objective,
            x0,
            jac=True,
            method="L-BFGS-B",
            bounds=bounds,
            options={"maxiter": cfg.iterations, "ftol": 1e-20, "gtol": 1e-14},
        )
        diag["starts_run"] = start + 1
        residual = float(np.max(np.abs(np.linalg.det(assemble(sol.x)))))
        best_residual = min(best_residual, residual)
        diag["best_residual"] = best_residual
        if residual < cfg.residual_tol:
            grid = [[x for x in row] for row in fixed.entries]
            for p, (i, j) in enumerate(free):
                grid[i][j] = _snap_into(float(sol.x[p]), cfg.snap_denominators[-1], fa.entries[i][j])
            candidate = RationalMatrix.from_rows(grid)
            hit = attempt(candidate, start, residual)
            if hit is not None:
                return hit
    return FalsifierResult(False, diagnostics=dict(diag))


# ---------------------------------------------------------------------------
# Structured-failure witness assembly
# ---------------------------------------------------------------------------


def _unpermute(
    grid: list[list[Fraction]], row_perm: Sequence[int], col_perm: Sequence[int]
) -> RationalMatrix:
    n = len(grid)
    m = len(grid[0])
    out = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n):
        for j in range(m):
            out[row_perm[i]][col_perm[j]] = grid[i][j]
    return RationalMatrix.from_rows(out)


def witness_from_row_failure(q: QIMatrix, decision: StructuredDecision) -> RationalMatrix:
    """Universal realization defeating every existential choice, from a failed
    rank condition of the one-column structured test."""
    form = decision.form
    res = decision.rank_failure
    assert form is not None and res is not None and res.witness_member is not None
    n = form.qim.rows
    k = form.k
    base = form.qim.base
    mid = base.midpoint()
    grid = [[mid[i, j] for j in range(n)] for i in range(n)]
    for i in range(k):
        grid[i][n - 1] = Fraction(0)  # existential slots hold zero in the split
    member = res.witness_member
    if decision.failed_block == "side":
        for i in range(n):
            for j in range(n - 1):
                grid[i][j] = member[i, j]
    else:  # bottom block (C c) realization arrives transposed
        bottom = member.transpose()
        for i in range(n - k):
            for j in range(n):
                grid[k + i][j] = bottom[i, j]
    return _unpermute(grid, form.row_perm, form.col_perm)


def witness_from_column_failure(
    q: QIMatrix,
    forall_cols: Sequence[int],
    decision: StructuredDecision,
) -> RationalMatrix:
    """Universal realization with linearly dependent universal columns."""
    res = decision.rank_failure
    assert res is not None and res.witness_member is not None
    n = q.rows
    grid = [[Fraction(0)] * n for _ in range(n)]
    fa, _ = q.split()
    low = fa.lower()
    for i in range(n):
        for j in range(n):
            grid[i][j] = low[i, j]
    for jj, j in enumerate(forall_cols):
        for i in range(n):
            grid[i][j] = res.witness_member[i, jj]
    return RationalMatrix.from_rows(grid)


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------


def _verify_within_budget(
    q: QIMatrix, witness: RationalMatrix, budget: int, diag: dict[str, Any]
) -> bool:
    """Exact witness confirmation for structured negatives.

    The structured characterizations are exact on their own, so an
    over-budget vertex sweep downgrades the certificate to unverified
    instead of blocking the verdict; an in-budget failure is a bug.
    """
    try:
        confirmed = verify_witness(q, witness, budget)
    except BudgetExceededError:
        diag["witness_verification"] = "skipped:vertex-budget"
        return False
    if not confirmed:
        raise AssertionError("structured witness failed exact verification")
    return True


def check_ae_regular(q: QIMatrix, config: EngineConfig | None = None) -> Verdict:
    """Classify a quantified interval matrix as AE regular, not, or unknown.

    Exact branches run first (quantifier-degenerate cases, sufficient class
    recognizers, structured characterizations); the numerical falsifier runs
    last and can only produce exactly verified negative witnesses.  UNKNOWN
    is an honest outcome: failure of the search never proves regularity.
    """
    cfg = config or EngineConfig()
    if not q.is_square:
        raise ShapeMismatchError("AE regularity is defined for square matrices")
    trace: list[str] = []
    diag: dict[str, Any] = {"trace": trace, "vertex_budget": cfg.vertex_budget}

    fa, ex = q.split()
    has_exists = bool(q.exists_positions())
    has_forall = bool(q.forall_positions())

    if not has_exists:
        trace.append("no-exists:classical-regularity")
        res = classical_regular(q.base, cfg.vertex_budget)
        if res.status is RegularityStatus.REGULAR:
            return Verdict(
                VerdictStatus.AE_REGULAR,
                "classical-regular",
                {"determinant_sign": res.determinant_sign, "checked": res.checked},
                diag,
            )
        if res.status is RegularityStatus.NOT_REGULAR:
            witness = res.witness_singular
            if witness is None or not verify_witness(q, witness, cfg.vertex_budget):
                raise AssertionError("classical singular witness failed exact verification")
            return Verdict(
                VerdictStatus.NOT_AE_REGULAR,
                "classical-singular-member",
                {"witness_forall": witness, "verified": True},
                diag,
            )
        trace.append("budget-exceeded")
        return Verdict(VerdictStatus.UNKNOWN, None, {}, diag)

    if not has_forall:
        trace.append("no-forall:strong-singularity")
        res = is_strongly_singular(q.base, cfg.vertex_budget)
        if res.status is SingularityStatus.STRONGLY_SINGULAR:
            return Verdict(
                VerdictStatus.NOT_AE_REGULAR,
                "no-forall/strong-singularity",
                {"witness_forall": fa.lower(), "verified": True},
                diag,
            )
        if res.status is SingularityStatus.NOT_STRONGLY_SINGULAR:
            return Verdict(
                VerdictStatus.AE_REGULAR,
                "no-forall/nonsingular-member",
                {
                    "nonsingular_member": res.witness_matrix,
                    "vertex": res.witness_vertex,
                    "determinant": res.witness_determinant,
                },
                diag,
            )
        trace.append("budget-exceeded")
        return Verdict(VerdictStatus.UNKNOWN, None, {}, diag)

    trace.append("ae-m-matrix")
    mcheck = ae_m_matrix(q)
    if mcheck:
        w = mcheck.witness
        return Verdict(
            VerdictStatus.AE_REGULAR,
            "ae-m-matrix",
            {
                "test_matrix": w.matrices["test_matrix"],
                "exists_realization": w.matrices["exists_realization"],
                "positive_vector": w.vector,
            },
            diag,
        )

    trace.append("ae-h-matrix")
    hcheck = ae_h_matrix(q)
    if hcheck:
        w = hcheck.witness
        return Verdict(
            VerdictStatus.AE_REGULAR,
            "ae-h-matrix",
            {
                "test_matrix": w.matrices["test_matrix"],
                "exists_realization": w.matrices["exists_realization"],
                "positive_vector": w.vector,
            },
            diag,
        )

    if matches_exists_column_shape(q):
        trace.append("structured-row")
        dec = structured_ae_regular_row(q)
        if dec:
            return Verdict(
                VerdictStatus.AE_REGULAR,
                "structured-row",
                {"row_perm": dec.form.row_perm, "col_perm": dec.form.col_perm},
                diag,
            )
        witness = witness_from_row_failure(q, dec)
        verified = _verify_within_budget(q, witness, cfg.vertex_budget, diag)
        return Verdict(
            VerdictStatus.NOT_AE_REGULAR,
            "structured-row",
            {
                "witness_forall": witness,
                "failed_block": dec.failed_block,
                "kernel_vector": dec.rank_failure.witness_vector,
                "verified": verified,
            },
            diag,
        )

    partition = column_block_partition(q)
    if partition is not None:
        trace.append("structured-columns")
        forall_cols, exists_cols = partition
        b_block = q.base.submatrix(range(q.rows), forall_cols)
        c_block = q.base.submatrix(range(q.rows), exists_cols)
        dec = structured_ae_regular_columns(b_block, c_block)
        if dec:
            return Verdict(
                VerdictStatus.AE_REGULAR,
                "structured-columns",
                {"forall_cols": forall_cols, "exists_cols": exists_cols},
                diag,
            )
        witness = witness_from_column_failure(q, forall_cols, dec)
        verified = _verify_within_budget(q, witness, cfg.vertex_budget, diag)
        return Verdict(
            VerdictStatus.NOT_AE_REGULAR,
            "structured-columns",
            {
                "witness_forall": witness,
                "kernel_vector": dec.rank_failure.witness_vector,
                "verified": verified,
            },
            diag,
        )

    trace.append("falsifier")
    try:
        fres = falsify_ae_regular(q, cfg)
    except BudgetExceededError as exc:
        trace.append("budget-exceeded")
        diag["falsifier_error"] = str(exc)
        return Verdict(VerdictStatus.UNKNOWN, None, {}, diag)
    diag["falsifier"] = fres.diagnostics
    if fres.found:
        return Verdict(
            VerdictStatus.NOT_AE_REGULAR,
            "falsifier",
            {
                "witness_forall": fres.witness,
                "start_index": fres.start_index,
                "residual": fres.residual,
                "verified": True,
            },
            diag,
        )
    return Verdict(VerdictStatus.UNKNOWN, None, {}, diag)
