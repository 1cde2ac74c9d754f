"""Command line front end: explain, saturate, check, oracle."""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from typing import List, Optional, Sequence, TextIO, Tuple

from . import oracle
from .abduction import (
    EmptyAbducibleSet,
    EntailmentModeUnavailable,
    ExplainConfig,
    explain,
    format_hypothesis,
    format_implicate,
)
from .abstraction import NonGroundTarget, abstract_clause, flatten_named_terms
from .ordering import OrderingContext
from .problem import ParseError, ProblemError, ProblemFile, parse, parse_clause
from .saturation import Limits, Status, saturate
from .terms import Clause, NonGround, negate_ground_clause

EXIT_OK, EXIT_UNSAT, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-clauses", type=int, default=50_000)
    common.add_argument("--max-iterations", type=int, default=200_000)
    common.add_argument("--seed", type=int, default=None)

    p = argparse.ArgumentParser(prog="groundexplain", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("explain", parents=[common], help="compute implicates and explanations")
    e.add_argument("--minimize", choices=("subsumption", "entailment", "auto"), default="auto")
    e.add_argument("--consistency-filter", action="store_true")
    e.add_argument("--stream", action="store_true", help="print ground A-clauses as they are found")

    s = sub.add_parser("saturate", parents=[common], help="saturate and list the A-clauses")
    s.add_argument("--plain-sp", action="store_true",
                   help="run ordinary superposition on the unabstracted input")
    s.add_argument("--stream", action="store_true")

    c = sub.add_parser("check", parents=[common], help="does the problem entail a clause?")
    c.add_argument("--implicate", required=True)

    o = sub.add_parser("oracle", parents=[common], help="enumerate A-implicates by brute force")
    o.add_argument("--max-len", type=int, default=2)
    o.add_argument("--prime", action="store_true")
    return p


def load(path: str) -> Tuple[ProblemFile, List[Clause], List[str]]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        raise CliError(f"FileNotFound: {path}")
    pf = parse(text)
    clauses = pf.clauses
    if pf.flatten:
        clauses, _, defs = flatten_named_terms(clauses, pf.flatten, pf.abducibles)
        clauses = clauses + defs
    return pf, clauses, pf.abducible_order()


def split_axioms(pf: ProblemFile, clauses: Sequence[Clause]) -> List[Clause]:
    """Axioms after flattening: everything except the goal clauses."""
    n_ax, n_goal = len(pf.axioms), len(pf.goals)
    return list(clauses[:n_ax]) + list(clauses[n_ax + n_goal:])


def limits_from(args) -> Limits:
    return Limits(max_clauses=args.max_clauses, max_iterations=args.max_iterations)


def emit(out: TextIO, args, payload: dict, lines: List[str]) -> None:
    if args.format == "json":
        out.write(json.dumps(payload) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def cmd_explain(args, out: TextIO, err: TextIO) -> int:
    pf, clauses, A = load(args.file)
    if not A:
        raise EmptyAbducibleSet("no abducible directive")
    ctx = OrderingContext(A)
    stream_to = out if args.format == "text" else err

    def on_a_clause(c: Clause) -> None:
        stream_to.write(f"found: {format_implicate(c, ctx)}\n")
        stream_to.flush()

    config = ExplainConfig(
        limits=limits_from(args),
        minimize=args.minimize,
        consistency_filter=args.consistency_filter,
        axioms=split_axioms(pf, clauses),
        on_a_clause=on_a_clause if args.stream else None,
    )
    report = explain(clauses, A, config)

    implicates = []
    for c in report.prime_implicates:
        entry = {"clause": format_implicate(c, ctx)}
        if args.consistency_filter:
            entry["consistent"] = report.consistency.get(c)
        implicates.append(entry)
    hyps = [format_hypothesis(c, ctx) for c in report.prime_implicates if not c.is_empty]
    stats = {k: report.stats.get(k, 0) for k in ("generated", "kept", "elapsed_ms")}
    tags = []
    if report.saturation is not None and report.saturation.variable_eligible_seen:
        tags.append("variable_eligible")
    if report.limit_reached:
        tags.append("limits")
    payload = {
        "status": report.status,
        "implicates": implicates,
        "explanations": hyps,
        "warnings": tags,
        "stats": stats,
    }

    lines = [f"status: {report.status}"]
    if report.status == "Unsatisfiable":
        lines.append("the input is unsatisfiable; no explanation is needed")
    else:
        lines.append("implicates:")
        for entry in implicates:
            tag = f"  [{entry['consistent']}]" if "consistent" in entry else ""
            lines.append(f"  {entry['clause']}{tag}")
        if hyps:
            parts = [h if " & " not in h else f"({h})" for h in hyps]
            lines.append(f"explanation: {' | '.join(parts)}")
        else:
            lines.append("explanation: none (no A-implicate)")
    lines += [f"warning: {w}" for w in report.warnings]
    lines.append("stats: " + " ".join(f"{k}={v}" for k, v in stats.items()))
    emit(out, args, payload, lines)
    return EXIT_UNSAT if report.status == "Unsatisfiable" else EXIT_OK


def cmd_saturate(args, out: TextIO, err: TextIO) -> int:
    pf, clauses, A = load(args.file)
    ctx = OrderingContext(A)
    if args.plain_sp:
        inputs = list(clauses)
    else:
        fresh = itertools.count(1)
        inputs = [abstract_clause(c, ctx.A, fresh) for c in clauses]
    stream_to = out if args.format == "text" else err

    def on_a(c: Clause) -> None:
        stream_to.write(f"found: {c}\n")

    result = saturate(inputs, ctx, limits_from(args), abstraction=not args.plain_sp,
                      on_a_clause=on_a if args.stream else None)
    a_clauses = [str(c) for c in result.t_infinity]
    ground_flat = [str(c) for c in result.t_infinity if c.ground and not c.is_empty]
    stats = {k: result.stats.get(k, 0) for k in ("generated", "kept", "elapsed_ms")}
    payload = {
        "status": result.status.value,
        "mode": "plain" if args.plain_sp else "abstracted",
        "a_clauses": a_clauses,
        "ground_a_clauses": ground_flat,
        "warnings": result.warnings,
        "stats": stats,
    }
    lines = [f"status: {result.status.value}", f"mode: {payload['mode']}", "A-clauses:"]
    lines += [f"  {c}" for c in a_clauses] or ["  (none)"]
    lines += [f"warning: {w}" for w in result.warnings]
    lines.append("stats: " + " ".join(f"{k}={v}" for k, v in stats.items()))
    emit(out, args, payload, lines)
    return EXIT_UNSAT if result.status is Status.UNSATISFIABLE else EXIT_OK


def cmd_check(args, out: TextIO, err: TextIO) -> int:
    pf, clauses, A = load(args.file)
    try:
        target = parse_clause(args.implicate)
    except ParseError as exc:
        raise CliError(f"--implicate: {exc}")
    if not target.ground:
        raise CliError("--implicate must be a ground clause")
    if all(c.ground for c in clauses):
        method = "oracle"
        entailed: Optional[bool] = oracle.entails(clauses, target)
    else:
        method = "refutation"
        ctx = OrderingContext(A)
        fresh = itertools.count(1)
        inputs = [abstract_clause(c, ctx.A, fresh) for c in list(clauses) + negate_ground_clause(target)]
        result = saturate(inputs, ctx, limits_from(args))
        entailed = {Status.UNSATISFIABLE: True, Status.SATURATED: False}.get(result.status)
    payload = {"clause": str(target), "entailed": entailed, "method": method}
    shown = "unknown" if entailed is None else str(entailed).lower()
    emit(out, args, payload, [f"clause: {target}", f"entailed: {shown}", f"method: {method}"])
    return EXIT_OK


def cmd_oracle(args, out: TextIO, err: TextIO) -> int:
    pf, clauses, A = load(args.file)
    if not A:
        raise EmptyAbducibleSet("no abducible directive")
    ctx = OrderingContext(A)
    try:
        found = oracle.enumerate_A_implicates(clauses, A, args.max_len, prime=args.prime)
    except oracle.InputUnsatisfiable:
        emit(out, args, {"status": "Unsatisfiable", "implicates": []}, ["status: Unsatisfiable"])
        return EXIT_UNSAT
    shown = [format_implicate(c, ctx) for c in found]
    emit(out, args, {"status": "Satisfiable", "implicates": shown},
         ["status: Satisfiable", "implicates:"] + [f"  {c}" for c in shown])
    return EXIT_OK


COMMANDS = {
    "explain": cmd_explain,
    "saturate": cmd_saturate,
    "check": cmd_check,
    "oracle": cmd_oracle,
}


def run(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    if args.seed is not None:
        random.seed(args.seed)
    try:
        return COMMANDS[args.command](args, out, err)
    except ParseError as exc:
        err.write(f"{args.file}:{exc}\n")
    except (EmptyAbducibleSet, EntailmentModeUnavailable, NonGround, NonGroundTarget,
            ProblemError) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
    except CliError as exc:
        err.write(f"error: {exc}\n")
    return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
