"""Command-line front end.

Subcommands: check-ae, strong-singular, classify, regularity,
explore-conjecture {1|2}.  Reports go to stdout (or --out) as text or JSON;
exact rationals are serialized as fraction strings, never floats.  Exit
codes: 0 conclusive, 2 unknown or budget exceeded, 1 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from enum import Enum
from fractions import Fraction
from typing import Any

from .classes import (
    ae_h_matrix,
    ae_inverse_nonnegative_sufficient,
    ae_m_matrix,
    strong_inverse_nonnegative,
    weak_h_matrix,
    weak_m_matrix,
)
from .core import IntervalMatrix, QIMatrix, VertexIndex
from .engine import (
    EngineConfig,
    RegularityStatus,
    VerdictStatus,
    check_ae_regular,
    classical_regular,
)
from .errors import BudgetExceededError
from .explorers import conjecture1_explorer, conjecture2_explorer
from .linalg import RationalMatrix
from .matfile import ParseError, parse_qimatrix
from .singularity import (
    RadiusFilter,
    SingularityStatus,
    is_strongly_singular,
    radius_filter,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNDECIDED = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 1 instead of argparse's 2
        raise _UsageError(message)


def jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, RationalMatrix):
        return [[str(v) for v in row] for row in x.entries]
    if isinstance(x, IntervalMatrix):
        return [[str(e) for e in row] for row in x.entries]
    if isinstance(x, VertexIndex):
        return {"width": x.width, "bits": x.bits, "choices": x.choices()}
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def _render_text(report: dict[str, Any], indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_render_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], list):
            lines.append(f"{pad}{key}:")
            for row in value:
                lines.append(f"{pad}  {' '.join(str(v) for v in row)}")
        else:
            lines.append(f"{pad}{key}: {value}")
    return "\n".join(lines)


def build_parser() -> _Parser:
    parser = _Parser(prog="aeregular", description=__doc__)
    sub = parser.add_subparsers(dest="task", required=True)

    def common(p: argparse.ArgumentParser, needs_input: bool = True):
        if needs_input:
            p.add_argument("--input", required=True, help="matrix file (qim format)")
        p.add_argument("--budget", type=int, default=20, help="vertex budget, in bits")
        p.add_argument("--starts", type=int, default=32)
        p.add_argument("--iters", type=int, default=500)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", default=None, help="write the report here instead of stdout")
        p.add_argument("--no-meta", action="store_true", help="omit wall time from the report")

    common(sub.add_parser("check-ae", help="decide AE regularity"))
    common(sub.add_parser("strong-singular", help="is every member singular?"))
    common(sub.add_parser("classify", help="run all class recognizers"))
    common(sub.add_parser("regularity", help="is every member nonsingular?"))
    exp = sub.add_parser("explore-conjecture", help="randomized conjecture exploration")
    exp.add_argument("which", choices=("1", "2"))
    exp.add_argument("--trials", type=int, default=1000)
    exp.add_argument("--max-size", type=int, default=4)
    common(exp, needs_input=False)
    return parser


def _engine_config(args) -> EngineConfig:
    return EngineConfig(
        vertex_budget=1 << args.budget,
        starts=args.starts,
        iterations=args.iters,
        seed=args.seed,
        residual_tol=args.tol,
    )


def _load(args) -> QIMatrix:
    with open(args.input, encoding="utf-8") as fh:
        return parse_qimatrix(fh.read())


def _task_check_ae(args) -> tuple[dict[str, Any], int]:
    q = _load(args)
    verdict = check_ae_regular(q, _engine_config(args))
    report = {
        "task": "check-ae",
        "input": args.input,
        "verdict": verdict.status.value,
        "method": verdict.method,
        "certificate": jsonable(verdict.certificate),
        "diagnostics": jsonable(verdict.diagnostics),
    }
    code = EXIT_OK if verdict.status is not VerdictStatus.UNKNOWN else EXIT_UNDECIDED
    return report, code


def _task_strong_singular(args) -> tuple[dict[str, Any], int]:
    q = _load(args)
    res = is_strongly_singular(q.base, 1 << args.budget)
    report = {
        "task": "strong-singular",
        "input": args.input,
        "status": res.status.value,
        "vertices_checked": res.vertices_checked,
    }
    if res.status is SingularityStatus.NOT_STRONGLY_SINGULAR:
        report["witness_vertex"] = jsonable(res.witness_vertex)
        report["witness_matrix"] = jsonable(res.witness_matrix)
        report["witness_determinant"] = jsonable(res.witness_determinant)
    code = EXIT_OK if res.conclusive else EXIT_UNDECIDED
    if not res.conclusive:
        # the radius pre-check can still conclude (without a witness) when
        # the vertex sweep does not fit the budget
        if radius_filter(q.base) is RadiusFilter.NOT_STRONGLY_SINGULAR:
            report["status"] = SingularityStatus.NOT_STRONGLY_SINGULAR.value
            report["method"] = "radius-filter"
            code = EXIT_OK
    return report, code


def _task_regularity(args) -> tuple[dict[str, Any], int]:
    q = _load(args)
    res = classical_regular(q.base, 1 << args.budget)
    report = {
        "task": "regularity",
        "input": args.input,
        "status": res.status.value,
        "checked": res.checked,
    }
    if res.status is RegularityStatus.NOT_REGULAR:
        report["witness_singular_member"] = jsonable(res.witness_singular)
    if res.status is RegularityStatus.REGULAR:
        report["determinant_sign"] = res.determinant_sign
    code = EXIT_OK if res.conclusive else EXIT_UNDECIDED
    return report, code


def _task_classify(args) -> tuple[dict[str, Any], int]:
    q = _load(args)
    budget = 1 << args.budget
    results: dict[str, Any] = {}
    code = EXIT_OK
    results["weak_m_matrix"] = bool(weak_m_matrix(q.base))
    results["ae_m_matrix"] = bool(ae_m_matrix(q))
    results["weak_h_matrix"] = bool(weak_h_matrix(q.base))
    results["ae_h_matrix"] = bool(ae_h_matrix(q))
    results["strong_inverse_nonnegative"] = strong_inverse_nonnegative(q.base)
    try:
        witness = ae_inverse_nonnegative_sufficient(q, budget=budget)
    except BudgetExceededError:
        results["ae_inverse_nonnegative_sufficient"] = "budget_exceeded"
        code = EXIT_UNDECIDED
    else:
        if witness is None:
            results["ae_inverse_nonnegative_sufficient"] = "not_found"
        else:
            results["ae_inverse_nonnegative_sufficient"] = "found"
            results["ae_inverse_nonnegative_witness"] = jsonable(witness)
    report = {"task": "classify", "input": args.input, "results": results}
    return report, code


def _task_explore(args) -> tuple[dict[str, Any], int]:
    cfg = EngineConfig(
        vertex_budget=1 << args.budget,
        starts=args.starts,
        iterations=args.iters,
        seed=args.seed,
        residual_tol=args.tol,
    )
    if args.which == "1":
        rep = conjecture1_explorer(
            args.trials, seed=args.seed, n_max=args.max_size, budget=1 << args.budget
        )
    else:
        rep = conjecture2_explorer(
            args.trials, seed=args.seed, n_max=args.max_size, config=cfg
        )
    report = {
        "task": f"explore-conjecture-{args.which}",
        "summary": jsonable(rep.summary),
        "confirmed_disagreements": len(rep.confirmed_disagreements),
    }
    if rep.confirmed_disagreements:
        report["counterexamples"] = jsonable(list(rep.confirmed_disagreements))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for record in rep.trials:
                fh.write(json.dumps(jsonable(record), sort_keys=True) + "\n")
            fh.write(json.dumps({"summary": jsonable(rep.summary)}, sort_keys=True) + "\n")
    return report, EXIT_OK


_TASKS = {
    "check-ae": _task_check_ae,
    "strong-singular": _task_strong_singular,
    "classify": _task_classify,
    "regularity": _task_regularity,
    "explore-conjecture": _task_explore,
}


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    started = time.perf_counter()
    try:
        report, code = _TASKS[args.task](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not args.no_meta:
        report["wall_time_ms"] = round((time.perf_counter() - started) * 1000.0, 3)
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2)
    else:
        text = _render_text(report)
    # explorer trial records already went to --out; the summary goes to stdout
    if args.out and args.task != "explore-conjecture":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
