"""Randomized explorers for the two conjectured characterizations.

Explorer 1 pits exact strong-singularity decisions against the conjectured
combinatorial certificate (a real submatrix whose rank falls short by
exactly the complementary dimension count).  Both sides are decided exactly,
so any disagreement is a reproducible counterexample, not a suspicion.

Explorer 2 targets the conjectured block generalization of the structured
characterizations: universal blocks B, C, E around an existential block D of
everywhere-positive radius, with the criterion that [B; C] and (C E) keep
full rank over all realizations.  A failed criterion is converted into an
exact negative witness; when the criterion holds, the numerical falsifier
plays adversary and only an exactly verified hit would count against the
conjecture.  Every trial is reseeded deterministically and serialized, so
any reported record replays.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .core import Interval, IntervalMatrix, QIMatrix, Quantifier
from .engine import EngineConfig, falsify_ae_regular, verify_witness
from .errors import BudgetExceededError
from .intrank import strongly_full_column_rank
from .linalg import RationalMatrix
from .matfile import format_interval_matrix, format_qimatrix
from .singularity import (
    GENERATOR_KINDS,
    conjecture1_witness,
    generate_strongly_singular,
    is_strongly_singular,
)


@dataclass(frozen=True)
class ExplorerReport:
    conjecture: int
    trials: tuple[dict[str, Any], ...]
    summary: dict[str, Any] = field(default_factory=dict)

    @property
    def confirmed_disagreements(self) -> tuple[dict[str, Any], ...]:
        return tuple(t for t in self.trials if t["status"].startswith("counterexample"))


def _hash_instance(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _trial_seed(seed: int, trial: int) -> int:
    return seed * 1_000_003 + trial


def _random_interval_matrix(
    rng: random.Random, n: int, max_nondegenerate: int
) -> IntervalMatrix:
    """Square matrix with small rational entries and a capped interval count."""
    positions = [(i, j) for i in range(n) for j in range(n)]
    rng.shuffle(positions)
    wide = set(positions[: rng.randint(0, min(max_nondegenerate, n * n))])
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            a = Fraction(rng.randint(-4, 4), rng.choice((1, 2)))
            if (i, j) in wide:
                b = a + Fraction(rng.randint(1, 4), rng.choice((1, 2)))
                row.append(Interval(a, b))
            else:
                row.append(Interval.point(a))
        rows.append(tuple(row))
    return IntervalMatrix(tuple(rows))


def conjecture1_explorer(
    trials: int,
    seed: int = 0,
    n_max: int = 4,
    budget: int = 1 << 20,
) -> ExplorerReport:
    """Compare exact strong singularity with the submatrix-rank certificate."""
    records: list[dict[str, Any]] = []
    counts: dict[str, int] = {}
    for t in range(trials):
        rng = random.Random(_trial_seed(seed, t))
        n = rng.randint(1, n_max)
        if rng.random() < 0.5:
            m = _random_interval_matrix(rng, n, max_nondegenerate=6)
        else:
            kind = rng.choice(GENERATOR_KINDS)
            if kind == "rank-deficient-block" and n < 2:
                kind = "zero-row"
            m = generate_strongly_singular(n, _trial_seed(seed, t) ^ 0x5EED, kind)
        res = is_strongly_singular(m, budget)
        if not res.conclusive:
            status = "inconclusive_budget"
            truth = None
            criterion = None
        else:
            truth = res.is_strongly_singular
            witness = conjecture1_witness(m)
            criterion = witness is not None
            if truth == criterion:
                status = "agree"
            elif truth and not criterion:
                status = "counterexample_only_if"
            else:
                status = "counterexample_if"  # would contradict the proven direction
        text = format_interval_matrix(m)
        record = {
            "trial": t,
            "seed": _trial_seed(seed, t),
            "n": n,
            "instance_hash": _hash_instance(text),
            "ground_truth": truth,
            "criterion": criterion,
            "status": status,
        }
        if status.startswith("counterexample"):
            record["instance"] = text
        records.append(record)
        counts[status] = counts.get(status, 0) + 1
    return ExplorerReport(1, tuple(records), {"trials": trials, "seed": seed, **counts})


# ---------------------------------------------------------------------------
# Conjecture 2: block quantifier structure
# ---------------------------------------------------------------------------


def _interval_around(rng: random.Random, value: Fraction, wide_prob: float) -> Interval:
    if rng.random() >= wide_prob:
        return Interval.point(value)
    u = Fraction(rng.randint(0, 2), 2)
    v = Fraction(rng.randint(0, 2), 2)
    return Interval(value - u, value + v)


def _block_instance(
    rng: random.Random, n: int
) -> tuple[QIMatrix, int, int]:
    """Random (B D; C E) instance with existential D of positive radius.

    With some probability a rank deficiency is planted: a realization of the
    stacked side block [B; C] with dependent columns, or of the bottom block
    (C E) with dependent rows, built first and then wrapped in intervals.
    """
    p = rng.randint(1, n - 1)
    width_d = 1 if n == 2 or rng.random() < 0.7 else 2
    q_cols = n - width_d
    while p * width_d > 6:
        width_d = 1
        q_cols = n - 1

    plant = rng.random()
    side = [[Fraction(rng.randint(-3, 3)) for _ in range(q_cols)] for _ in range(n)]
    bottom_right = [
        [Fraction(rng.randint(-3, 3)) for _ in range(width_d)] for _ in range(n - p)
    ]
    if plant < 0.25 and q_cols >= 2:
        # make last side column a combination of the others
        for i in range(n):
            side[i][q_cols - 1] = sum(side[i][j] for j in range(q_cols - 1))
    elif plant < 0.4 and n - p >= 2:
        # make last bottom row a combination of the others
        for j in range(q_cols):
            side[n - 1][j] = sum(side[p + i][j] for i in range(n - p - 1))
        for j in range(width_d):
            bottom_right[n - p - 1][j] = sum(
                bottom_right[i][j] for i in range(n - p - 1)
            )
    elif plant < 0.5 and q_cols == 1:
        for i in range(n):
            side[i][0] = Fraction(0)

    rows = []
    quants = []
    for i in range(n):
        row = []
        qrow = []
        for j in range(q_cols):
            row.append(_interval_around(rng, side[i][j], wide_prob=0.35))
            qrow.append(Quantifier.FORALL)
        for j in range(width_d):
            if i < p:
                center = Fraction(rng.randint(-2, 2))
                r1 = Fraction(rng.randint(1, 2), 2)
                r2 = Fraction(rng.randint(1, 2), 2)
                row.append(Interval(center - r1, center + r2))
                qrow.append(Quantifier.EXISTS)
            else:
                row.append(_interval_around(rng, bottom_right[i - p][j], wide_prob=0.35))
                qrow.append(Quantifier.FORALL)
        rows.append(tuple(row))
        quants.append(tuple(qrow))
    return QIMatrix(IntervalMatrix(tuple(rows)), tuple(quants)), p, q_cols


def _criterion_blocks(
    q: QIMatrix, p: int, q_cols: int
) -> tuple[IntervalMatrix, IntervalMatrix | None]:
    n = q.rows
    base = q.base
    side = base.submatrix(range(n), range(q_cols))
    bottom = base.submatrix(range(p, n), range(n)) if p < n else None
    return side, bottom


def conjecture2_explorer(
    trials: int,
    seed: int = 0,
    n_max: int = 4,
    config: EngineConfig | None = None,
) -> ExplorerReport:
    """Test the conjectured block criterion against exact/falsifier ground truth.

    criterion: [B; C] has strongly full column rank and (C E) has strongly
    full row rank.  False criteria yield exact negative witnesses (so the
    proven direction is re-verified on every such trial); true criteria are
    attacked by the falsifier, and only an exactly confirmed hit is reported
    as a counterexample.  The alternative reading (B E), dimensionally valid
    only when B and E have equally many rows, is logged alongside.
    """
    cfg = config or EngineConfig(starts=4, iterations=120)
    records: list[dict[str, Any]] = []
    counts: dict[str, int] = {}
    for t in range(trials):
        rng = random.Random(_trial_seed(seed, t))
        n = rng.randint(2, n_max)
        qim, p, q_cols = _block_instance(rng, n)
        side, bottom = _criterion_blocks(qim, p, q_cols)
        sfr_side = strongly_full_column_rank(side)
        sfr_bottom = (
            strongly_full_column_rank(bottom.transpose()) if bottom is not None else None
        )
        criterion = bool(sfr_side) and (sfr_bottom is None or bool(sfr_bottom))

        # alternative block reading (B E): only typechecks when p == n - p
        alt: bool | None = None
        if p == n - p:
            b_block = qim.base.submatrix(range(p), range(q_cols))
            e_block = qim.base.submatrix(range(p, n), range(q_cols, n))
            joined = IntervalMatrix(
                tuple(rb + re for rb, re in zip(b_block.entries, e_block.entries))
            )
            alt = bool(sfr_side) and bool(strongly_full_column_rank(joined.transpose()))

        status: str
        witness_text = None
        if not criterion:
            witness = _witness_from_block_failure(
                qim, p, q_cols, sfr_side, sfr_bottom
            )
            try:
                confirmed = verify_witness(qim, witness, cfg.vertex_budget)
            except BudgetExceededError:
                confirmed = False
            status = "agree_confirmed_not_ae" if confirmed else "construction_failed"
            if confirmed:
                witness_text = [[str(x) for x in row] for row in witness.entries]
        else:
            fres = falsify_ae_regular(qim, EngineConfig(
                vertex_budget=cfg.vertex_budget,
                starts=cfg.starts,
                iterations=cfg.iterations,
                seed=_trial_seed(seed, t),
                residual_tol=cfg.residual_tol,
                snap_denominators=cfg.snap_denominators,
            ))
            if fres.found:
                status = "counterexample_criterion_true_but_not_ae"
                witness_text = [[str(x) for x in row] for row in fres.witness.entries]
            else:
                status = "agree_unrefuted"

        text = format_qimatrix(qim)
        record = {
            "trial": t,
            "seed": _trial_seed(seed, t),
            "n": n,
            "p": p,
            "q_cols": q_cols,
            "instance_hash": _hash_instance(text),
            "criterion": criterion,
            "alt_reading": alt,
            "status": status,
        }
        if status.startswith("counterexample") or status == "construction_failed":
            record["instance"] = text
            if witness_text is not None:
                record["witness"] = witness_text
        records.append(record)
        counts[status] = counts.get(status, 0) + 1
    return ExplorerReport(2, tuple(records), {"trials": trials, "seed": seed, **counts})


def _witness_from_block_failure(
    qim: QIMatrix,
    p: int,
    q_cols: int,
    sfr_side,
    sfr_bottom,
) -> RationalMatrix:
    """Universal realization defeating every existential choice of D."""
    n = qim.rows
    fa, _ = qim.split()
    grid = [[fa.entries[i][j].mid for j in range(n)] for i in range(n)]
    if not sfr_side:
        member = sfr_side.witness_member  # n x q_cols with dependent columns
        for i in range(n):
            for j in range(q_cols):
                grid[i][j] = member[i, j]
    else:
        member = sfr_bottom.witness_member.transpose()  # (n-p) x n dependent rows
        for i in range(n - p):
            for j in range(n):
                grid[p + i][j] = member[i, j]
        for i in range(p):
            for j in range(q_cols, n):
                grid[i][j] = Fraction(0)  # existential slots are zero in the split
    for i in range(p):
        for j in range(q_cols, n):
            grid[i][j] = Fraction(0)
    return RationalMatrix.from_rows(grid)
