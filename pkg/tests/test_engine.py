"""Verdict pipeline, classical regularity, falsifier, witness verification."""

import random
from fractions import Fraction as F

import pytest

from aeregular import (
    EngineConfig,
    IntervalMatrix,
    QIMatrix,
    Quantifier,
    RationalMatrix,
    RegularityStatus,
    VerdictStatus,
    check_ae_regular,
    classical_regular,
    determinant,
    falsify_ae_regular,
    null_space_vector,
    random_member,
    verify_witness,
)
from aeregular.core import Interval
from aeregular.engine import exists_vertex_matrices
from oracles import random_interval_matrix, random_rational_matrix

A = Quantifier.FORALL
E = Quantifier.EXISTS

FAST = EngineConfig(starts=6, iterations=150)


def box(center_radius_rows) -> IntervalMatrix:
    return IntervalMatrix.from_rows(center_radius_rows)


class TestClassicalRegular:
    def test_degenerate_identity(self):
        m = IntervalMatrix.from_point(RationalMatrix.identity(2))
        assert classical_regular(m).status is RegularityStatus.REGULAR

    def test_radius_two_fifths_regular(self):
        d = F(2, 5)
        m = box(
            [[(1 - d, 1 + d), (-d, d)], [(-d, d), (1 - d, 1 + d)]]
        )
        res = classical_regular(m)
        assert res.status is RegularityStatus.REGULAR
        assert res.determinant_sign == 1
        assert res.checked == 16

    def test_radius_three_fifths_not_regular(self):
        d = F(3, 5)
        m = box(
            [[(1 - d, 1 + d), (-d, d)], [(-d, d), (1 - d, 1 + d)]]
        )
        res = classical_regular(m)
        assert res.status is RegularityStatus.NOT_REGULAR
        w = res.witness_singular
        assert determinant(w) == 0
        assert m.contains(w)

    def test_budget(self):
        m = IntervalMatrix.from_point(RationalMatrix.identity(3))
        assert classical_regular(m, budget=16).status is RegularityStatus.BUDGET_EXCEEDED

    def test_witness_always_exact(self, rng):
        negatives = 0
        for _ in range(60):
            m = random_interval_matrix(rng, rng.randint(1, 3), max_wide=9)
            res = classical_regular(m)
            if res.status is RegularityStatus.NOT_REGULAR:
                negatives += 1
                assert determinant(res.witness_singular) == 0
                assert m.contains(res.witness_singular)
            elif res.status is RegularityStatus.REGULAR:
                for _ in range(50):
                    assert determinant(random_member(m, rng)) != 0
        assert negatives > 5


class TestKernelNormalizationEquivalence:
    def test_singular_iff_weighted_sum_reaches_one(self, rng):
        # a square matrix has a nontrivial kernel iff some x with B.x = 0 can be
        # scaled so that a sign vector s in [-1,1]^n gives s.x = 1
        for _ in range(40):
            n = rng.randint(2, 4)
            if rng.random() < 0.5:
                left = random_rational_matrix(rng, n, n - 1)
                right = random_rational_matrix(rng, n - 1, n)
                b = left @ right
            else:
                b = random_rational_matrix(rng, n, n)
            x = null_space_vector(b)
            if x is None:
                assert determinant(b) != 0
                continue
            assert determinant(b) == 0
            norm1 = sum(abs(v) for v in x)
            assert norm1 > 0
            scaled = tuple(v / norm1 for v in x)  # now the 1-norm is exactly 1
            s = tuple(
                (F(1) if v > 0 else F(-1) if v < 0 else F(0)) for v in scaled
            )
            assert all(abs(c) <= 1 for c in s)
            assert sum(si * v for si, v in zip(s, scaled)) == 1
            assert all(v == 0 for v in b.apply(scaled))


class TestVerifyWitness:
    def test_counterexample_zero_forall(self):
        q = QIMatrix.from_rows(
            [[0, ((-1, 1), E)], [0, ((-1, 1), E)]]
        )
        assert verify_witness(q, RationalMatrix.zeros(2, 2))

    def test_rejects_nonsingular_vertex(self):
        q = QIMatrix.from_rows([[((0, 2), A), 1], [1, 1]])
        assert not verify_witness(q, RationalMatrix.from_rows([[2, 1], [1, 1]]))
        assert verify_witness(q, RationalMatrix.from_rows([[1, 1], [1, 1]]))

    def test_out_of_bounds_candidate(self):
        q = QIMatrix.from_rows([[((0, 2), A), 1], [1, 1]])
        with pytest.raises(ValueError):
            verify_witness(q, RationalMatrix.from_rows([[3, 1], [1, 1]]))

    def test_exists_vertices_enumerated(self):
        q = QIMatrix.from_rows(
            [[0, ((-1, 1), E)], [0, ((-1, 1), E)]]
        )
        verts = exists_vertex_matrices(q)
        assert len(verts) == 4


class TestFalsifier:
    def test_1x1_universal(self):
        q = QIMatrix.from_rows([[((-1, 1), A)]])
        res = falsify_ae_regular(q, FAST)
        assert res.found
        assert res.witness == RationalMatrix.zeros(1, 1)

    def test_linear_determinant_root(self):
        q = QIMatrix.from_rows([[((0, 2), A), 1], [1, 1]])
        res = falsify_ae_regular(q, FAST)
        assert res.found
        assert res.witness[0, 0] == 1

    def test_not_found_on_structured_regular(self):
        q = QIMatrix.from_rows(
            [[((F("0.8"), 1), E), ((-1, 0), A)], [-1, 1]]
        )
        res = falsify_ae_regular(q, FAST)
        assert not res.found
        assert res.diagnostics["starts_run"] == FAST.starts

    def test_no_free_entries_direct_check(self):
        q = QIMatrix.from_rows([[0, ((-1, 1), E)], [0, ((-1, 1), E)]])
        res = falsify_ae_regular(q, FAST)
        assert res.found and res.witness == RationalMatrix.zeros(2, 2)

    def test_mixed_exists_zero_column_variety(self):
        # universal box around a matrix with an all-zero second column and an
        # existential entry elsewhere: every confirmed witness zeroes column 2
        q = QIMatrix.from_rows(
            [
                [((-1, 1), E), ((-F(1, 2), F(1, 2)), A)],
                [((-2, 2), A), ((-F(1, 2), F(1, 2)), A)],
            ]
        )
        res = falsify_ae_regular(q, EngineConfig(starts=16, iterations=300, seed=3))
        assert res.found
        assert res.witness[0, 1] == 0 and res.witness[1, 1] == 0
        assert verify_witness(q, res.witness)


class TestPipeline:
    def test_branch_no_exists_regular(self):
        q = QIMatrix.uniform(IntervalMatrix.from_point(RationalMatrix.identity(2)), A)
        v = check_ae_regular(q, FAST)
        assert v.status is VerdictStatus.AE_REGULAR
        assert v.method == "classical-regular"

    def test_branch_no_exists_singular(self):
        q = QIMatrix.from_rows([[((0, 2), A), 1], [1, 1]])
        v = check_ae_regular(q, FAST)
        assert v.status is VerdictStatus.NOT_AE_REGULAR
        assert v.method == "classical-singular-member"
        assert v.certificate["verified"] is True

    def test_branch_no_forall(self):
        q = QIMatrix.from_rows([[0, ((-1, 1), E)], [0, ((-1, 1), E)]])
        v = check_ae_regular(q, FAST)
        assert v.status is VerdictStatus.NOT_AE_REGULAR
        assert v.method == "no-forall/strong-singularity"
        q1 = QIMatrix.from_rows([[((-1, 1), E)]])
        v1 = check_ae_regular(q1, FAST)
        assert v1.status is VerdictStatus.AE_REGULAR
        assert v1.method == "no-forall/nonsingular-member"

    def test_branch_ae_m(self):
        q = QIMatrix.from_rows(
            [
                [((1, 2), A), ((F(-1, 2), 0), E)],
                [((F(-1, 2), 0), E), ((1, 2), A)],
            ]
        )
        v = check_ae_regular(q, FAST)
        assert v.status is VerdictStatus.AE_REGULAR
        assert v.method == "ae-m-matrix"

    def test_branch_ae_h(self):
        # negative diagonal H-instance: not an M-matrix but AE H works
        q = QIMatrix.from_rows(
            [
                [((-3, -2), A), ((F(-1, 4), F(1, 4)), E)],
                [((F(-1, 4), F(1, 4)), E), ((2, 3), A)],
            ]
        )
        v = check_ae_regular(q, FAST)
        assert v.status is VerdictStatus.AE_REGULAR
        assert v.method == "ae-h-matrix"

    def test_branch_structured_row(self):
        q = QIMatrix.from_rows(
            [[((F("0.8"), 1), E), ((-1, 0), A)], [-1, 1]]
        )
        v = check_ae_regular(q, FAST)
        assert v.status is VerdictStatus.AE_REGULAR
        assert v.method == "structured-row"

    def test_branch_structured_row_negative(self):
        q = QIMatrix.from_rows(
            [
                [1, ((0, 1), E)],
                [((-1, 1), A), ((-1, 1), A)],
            ]
        )
        v = check_ae_regular(q, FAST)
        assert v.status is VerdictStatus.NOT_AE_REGULAR
        assert v.method == "structured-row"
        assert verify_witness(q, v.certificate["witness_forall"])

    def test_branch_structured_columns(self):
        # a zero-straddling universal entry kills the M/H bounds, but the
        # universal column never vanishes as a vector, so the two full
        # existential columns save it
        q = QIMatrix.from_rows(
            [
                [((0, 1), A), ((-2, 2), E), ((-2, 2), E)],
                [((1, 2), A), ((-2, 2), E), ((-2, 2), E)],
                [((-1, 0), A), ((-2, 2), E), ((-2, 2), E)],
            ]
        )
        v = check_ae_regular(q, FAST)
        assert v.status is VerdictStatus.AE_REGULAR
        assert v.method == "structured-columns"

    def test_branch_structured_columns_negative(self):
        q = QIMatrix.from_rows(
            [
                [((-1, 1), A), ((-2, 2), E), ((-2, 2), E)],
                [((-1, 1), A), ((-2, 2), E), ((-2, 2), E)],
                [((-1, 1), A), ((-2, 2), E), ((-2, 2), E)],
            ]
        )
        v = check_ae_regular(q, FAST)
        assert v.status is VerdictStatus.NOT_AE_REGULAR
        assert v.method == "structured-columns"
        assert verify_witness(q, v.certificate["witness_forall"])

    def test_branch_falsifier(self):
        # existential entries scattered over two columns (no structured shape)
        # and a universal middle column that can be zeroed
        q = QIMatrix.from_rows(
            [
                [((-1, 1), E), ((-F(1, 2), F(1, 2)), A), 1],
                [2, ((-F(1, 2), F(1, 2)), A), ((-1, 1), E)],
                [1, ((-F(1, 2), F(1, 2)), A), 2],
            ]
        )
        v = check_ae_regular(q, EngineConfig(starts=16, iterations=300, seed=1))
        assert v.status is VerdictStatus.NOT_AE_REGULAR
        assert v.method == "falsifier"
        assert v.certificate["witness_forall"].column(1) == (F(0), F(0), F(0))
        assert verify_witness(q, v.certificate["witness_forall"])

    def test_unknown_is_honest(self):
        # existential diagonal entries spanning two columns (no structure),
        # universal off-diagonal too wide for the M/H bounds, and no
        # universal realization kills all four existential vertices: the
        # instance is AE regular but the pipeline cannot prove it
        q = QIMatrix.from_rows(
            [
                [((1, 2), E), ((-3, 3), A)],
                [((-3, 3), A), ((1, 2), E)],
            ]
        )
        v = check_ae_regular(q, EngineConfig(starts=8, iterations=150, seed=2))
        assert v.status is VerdictStatus.UNKNOWN
        assert v.diagnostics["trace"][-1] == "falsifier"
        assert v.diagnostics["falsifier"]["starts_run"] == 8

    def test_grid_scan_backs_ae_regular(self, rng):
        # on small instances, every universal grid point admits a nonsingular
        # existential extension when the verdict is AE_REGULAR
        instances = [
            QIMatrix.from_rows(
                [[((F("0.8"), 1), E), ((-1, 0), A)], [-1, 1]]
            ),
            QIMatrix.from_rows(
                [
                    [((1, 2), A), ((-2, 2), E)],
                    [((-1, 1), A), ((-2, 2), E)],
                ]
            ),
        ]
        from aeregular import is_strongly_singular

        for q in instances:
            v = check_ae_regular(q, FAST)
            assert v.status is VerdictStatus.AE_REGULAR
            fa, ex = q.split()
            free = fa.nondegenerate_positions()
            assert len(free) <= 2
            grids = []
            for (i, j) in free:
                iv = fa.entries[i][j]
                step = (iv.hi - iv.lo) / 16
                grids.append([iv.lo + step * t for t in range(17)])
            import itertools

            for combo in itertools.product(*grids):
                grid_real = [[fa.entries[i][j].lo for j in range(q.cols)] for i in range(q.rows)]
                for (pos, val) in zip(free, combo):
                    grid_real[pos[0]][pos[1]] = val
                a_forall = RationalMatrix.from_rows(grid_real)
                shifted = ex.add_point(a_forall)
                assert not is_strongly_singular(shifted).is_strongly_singular

    def test_monotonicity_on_corpus(self, rng):
        # widening existential intervals never destroys AE regularity;
        # widening universal intervals never repairs its absence
        corpus = [
            QIMatrix.from_rows([[((F("0.8"), 1), E), ((-1, 0), A)], [-1, 1]]),
            QIMatrix.from_rows([[0, ((-1, 1), E)], [0, ((-1, 1), E)]]),
            QIMatrix.from_rows([[((0, 2), A), 1], [1, 1]]),
            QIMatrix.from_rows(
                [[((1, 2), A), ((-2, 2), E)], [((-1, 1), A), ((-2, 2), E)]]
            ),
        ]
        for q in corpus:
            v = check_ae_regular(q, FAST)
            if v.status is VerdictStatus.UNKNOWN:
                continue
            exists_nd = q.exists_positions()
            forall_nd = q.forall_positions()
            if v.status is VerdictStatus.AE_REGULAR and exists_nd:
                i, j = exists_nd[0]
                e = q.base.entries[i][j]
                widened = QIMatrix(
                    q.base.permute(range(q.rows), range(q.cols)), q.quants
                )
                grid = [list(r) for r in q.base.entries]
                grid[i][j] = Interval(e.lo - 1, e.hi + 1)
                widened = QIMatrix(IntervalMatrix(tuple(tuple(r) for r in grid)), q.quants)
                v2 = check_ae_regular(widened, FAST)
                assert v2.status is not VerdictStatus.NOT_AE_REGULAR
            if v.status is VerdictStatus.NOT_AE_REGULAR and forall_nd:
                i, j = forall_nd[0]
                e = q.base.entries[i][j]
                grid = [list(r) for r in q.base.entries]
                grid[i][j] = Interval(e.lo - 1, e.hi + 1)
                widened = QIMatrix(IntervalMatrix(tuple(tuple(r) for r in grid)), q.quants)
                v2 = check_ae_regular(widened, FAST)
                assert v2.status is not VerdictStatus.AE_REGULAR

    def test_degenerate_tags_never_change_the_verdict(self):
        base = [
            [((F("0.8"), 1), E), ((-1, 0), A)],
            [(-1, -1), (1, 1)],
        ]
        flipped = [
            [((F("0.8"), 1), E), ((-1, 0), A)],
            [((-1, -1), E), ((1, 1), E)],
        ]
        va = check_ae_regular(QIMatrix.from_rows(base), FAST)
        vb = check_ae_regular(QIMatrix.from_rows(flipped), FAST)
        assert va.status == vb.status and va.method == vb.method

    def test_ae_regular_implies_ae_solvable_fixture(self, rng):
        # the engine rejects this instance, yet the system stays AE solvable
        # for every right-hand side: the converse implication genuinely fails
        q = QIMatrix.from_rows([[0, ((-1, 1), E)], [0, ((-1, 1), E)]])
        v = check_ae_regular(q, FAST)
        assert v.status is VerdictStatus.NOT_AE_REGULAR
        for _ in range(50):
            b = (F(rng.randint(-8, 8), 2), F(rng.randint(-8, 8), 2))
            s = max(F(1), abs(b[0]), abs(b[1]))
            t = (b[0] / s, b[1] / s)
            assert all(-1 <= ti <= 1 for ti in t)
            x = (F(0), s)
            realized = RationalMatrix.from_rows([[0, t[0]], [0, t[1]]])
            assert realized.apply(x) == b
