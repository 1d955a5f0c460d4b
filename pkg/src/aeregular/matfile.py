"""Text format for quantified interval matrices.

    qim <rows> <cols>
    <cell> <cell> ...          (one line per row)

A cell is a bare number (degenerate entry, universal by convention), or
``[lo,hi]A`` / ``[lo,hi]E`` for a universally / existentially quantified
interval.  Numbers are decimal or ``p/q`` literals and convert to exact
rationals with no floating-point intermediate, so ``0.8`` really is 4/5.
Degenerate ``[x,x]E`` cells are accepted and normalized to universal, which
never changes any verdict.  Lines starting with ``#`` and blank lines are
ignored.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .core import Interval, IntervalMatrix, QIMatrix, Quantifier

_CELL_RE = re.compile(r"^\[([^,\[\]]+),([^,\[\]]+)\]([AE])$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _number(token: str, line: int, column: int) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"invalid number {token!r}", line, column) from None


def parse_qimatrix(text: str) -> QIMatrix:
    """Parse the matrix file format; errors carry 1-based line and column."""
    text = text.replace("−", "-")  # unicode minus
    lines = [
        (idx + 1, raw)
        for idx, raw in enumerate(text.splitlines())
        if raw.strip() and not raw.lstrip().startswith("#")
    ]
    if not lines:
        raise ParseError("empty input", 1, 1)
    head_line, head = lines[0]
    head_tokens = head.split()
    if len(head_tokens) != 3 or head_tokens[0] != "qim":
        raise ParseError("expected header 'qim <rows> <cols>'", head_line, 1)
    try:
        rows, cols = int(head_tokens[1]), int(head_tokens[2])
    except ValueError:
        raise ParseError("header dimensions must be integers", head_line, 1) from None
    if rows < 1 or cols < 1:
        raise ParseError("dimensions must be positive", head_line, 1)
    body = lines[1:]
    if len(body) != rows:
        raise ParseError(
            f"expected {rows} matrix rows, found {len(body)}", head_line, 1
        )
    base_rows: list[tuple[Interval, ...]] = []
    quant_rows: list[tuple[Quantifier, ...]] = []
    for line_no, raw in body:
        cells = [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", raw)]
        if len(cells) != cols:
            raise ParseError(f"expected {cols} cells, found {len(cells)}", line_no, 1)
        brow: list[Interval] = []
        qrow: list[Quantifier] = []
        for token, col_no in cells:
            m = _CELL_RE.match(token)
            if m:
                lo = _number(m.group(1), line_no, col_no)
                hi = _number(m.group(2), line_no, col_no)
                if lo > hi:
                    raise ParseError(
                        f"interval endpoints out of order: [{lo},{hi}]", line_no, col_no
                    )
                tag = Quantifier.FORALL if m.group(3) == "A" else Quantifier.EXISTS
                if lo == hi:
                    tag = Quantifier.FORALL  # degenerate cells normalize to universal
                brow.append(Interval(lo, hi))
                qrow.append(tag)
            else:
                value = _number(token, line_no, col_no)
                brow.append(Interval.point(value))
                qrow.append(Quantifier.FORALL)
        base_rows.append(tuple(brow))
        quant_rows.append(tuple(qrow))
    return QIMatrix(IntervalMatrix(tuple(base_rows)), tuple(quant_rows))


def format_qimatrix(q: QIMatrix) -> str:
    """Canonical text form; parsing it back reproduces the matrix exactly."""
    out = [f"qim {q.rows} {q.cols}"]
    for i in range(q.rows):
        cells = []
        for j in range(q.cols):
            e = q.base.entries[i][j]
            if e.is_degenerate:
                cells.append(str(e.lo))
            else:
                tag = "A" if q.quants[i][j] is Quantifier.FORALL else "E"
                cells.append(f"[{e.lo},{e.hi}]{tag}")
        out.append(" ".join(cells))
    return "\n".join(out) + "\n"


def format_interval_matrix(m: IntervalMatrix) -> str:
    return format_qimatrix(QIMatrix.uniform(m, Quantifier.FORALL))
