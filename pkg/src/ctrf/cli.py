"""Command-line front end.

Exit codes: 0 when every check passed, 1 for a verified mathematical failure
(a witness is printed and any report still written), 2 for usage errors.
With ``--json`` exactly one JSON document goes to standard output.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from . import __version__
from .counterexample import verify_contraction, verify_lipschitz, verify_no_fixed_point
from .dyadic import format_dyadic
from .errors import (
    CauchyBoundViolated,
    MaxIterExceeded,
    ModulusViolated,
    NoCommonFixedPoint,
    NotClosedUnderMaps,
    NotContractiveWitness,
    OracleFailed,
    WordParseError,
)
from .fixedpoint import (
    ContractiveFamily,
    SolverTrace,
    banach,
    bounded_uc_common_fixed_point,
    common_fixed_point_pair,
    finite_space_common_fixed_point,
)
from .spaces import get_space, space_names
from .treemetric import d_length, path_edges, rho, to_dot
from .words import all_words, format_word, meet, min_repeat_blocks, p0, p0_oracle, parse_word

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_EXPORT_DEPTH = 12
ORACLE_LIMIT = 16
SPOT_CHECKS = 64

SOLVER_ERRORS = (
    MaxIterExceeded,
    NotContractiveWitness,
    CauchyBoundViolated,
    OracleFailed,
    ModulusViolated,
    NoCommonFixedPoint,
)


class UsageError(Exception):
    pass


def _emit(args, doc: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _word(text: str) -> str:
    try:
        return parse_word(text)
    except WordParseError as exc:
        raise UsageError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def _fraction(text: str) -> Fraction:
    try:
        num, den = text.split("/")
        value = Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected p/q, got {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("factor must be positive")
    return value


def _env_workers() -> int:
    raw = os.environ.get("CTRF_WORKERS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"CTRF_WORKERS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"CTRF_WORKERS must be a positive integer, got {raw!r}")
    return n


# -- period / dist ------------------------------------------------------------


def cmd_period(args) -> int:
    w = _word(args.word)
    p = p0(w)
    blocks = sorted(min_repeat_blocks(w)) if w else []
    doc = {"word": format_word(w), "p0": p, "blocks": blocks}
    if len(w) <= ORACLE_LIMIT:
        doc["oracle"] = p0_oracle(w, ORACLE_LIMIT)
        doc["oracle_agrees"] = doc["oracle"] == p
    lines = [f"p0({format_word(w)}) = {p}"]
    if "oracle" in doc:
        lines.append(f"oracle: {doc['oracle']} ({'agrees' if doc['oracle_agrees'] else 'DISAGREES'})")
    lines.append("repeat blocks: " + (", ".join(doc["blocks"]) or "(none)"))
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK if doc.get("oracle_agrees", True) else EXIT_FAIL


def cmd_dist(args) -> int:
    u, v = _word(args.u), _word(args.v)
    r = rho(u, v)
    m = meet(u, v)
    edges = path_edges(u, v)
    doc = {
        "u": format_word(u),
        "v": format_word(v),
        "rho": format_dyadic(r),
        "meet": format_word(m),
        "d_length": {"u": format_dyadic(d_length(u)), "v": format_dyadic(d_length(v)),
                     "meet": format_dyadic(d_length(m))},
        "edges": [{"parent": format_word(e.parent), "child": format_word(e.child),
                   "weight": format_dyadic(e.weight)} for e in edges],
    }
    lines = [f"rho({doc['u']}, {doc['v']}) = {doc['rho']}  ({float(r)!r})",
             f"meet: {doc['meet']}"]
    lines += [f"  {e['parent']} -- {e['child']}: {e['weight']}" for e in doc["edges"]]
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


# -- verify -------------------------------------------------------------------------


def _spot_check(kind: str, max_len: int, factor: Fraction, seed: int) -> dict:
    """Re-check random pairs with the pure-Python metric, independently of the kernels."""
    words = list(all_words(max_len))
    pairs = list(combinations(words, 2))
    if len(pairs) > SPOT_CHECKS:
        pairs = random.Random(seed).sample(pairs, SPOT_CHECKS)
    bad = []
    for x, y in pairs:
        r = rho(x, y)
        s, t = rho("a" + x, "a" + y), rho("b" + x, "b" + y)
        m = min(s, t) if kind == "contraction" else max(s, t)
        if m.as_fraction() > factor * r.as_fraction():
            bad.append([format_word(x), format_word(y)])
    return {"seed": seed, "pairs": len(pairs), "failures": bad}


def cmd_verify(args) -> int:
    jobs = args.jobs if args.jobs is not None else _env_workers()
    if args.kind == "no-fixed-point":
        report = verify_no_fixed_point(args.max_len, args.max_comp)
        doc = report.to_json()
        n_cert = sum(c.verified for c in report.certificates)
        lines = [
            f"no-fixed-point: {'PASS' if report.passed else 'FAIL'}",
            f"compositions up to length {args.max_comp}: {report.compositions}",
            f"finite-word checks: {report.finite_checks}, failures: {len(report.finite_failures)}",
            f"divergence certificates: {n_cert} of {len(report.certificates)} exceed "
            f"{format_dyadic(report.bound)}",
        ]
        lines += [f"  {c.block}: N={c.n}" for c in report.certificates[: args.show]]
        passed = report.passed
    else:
        if args.kind == "contraction":
            factor = args.factor if args.factor is not None else Fraction(3, 4)
            report = verify_contraction(args.max_len, factor, workers=jobs)
        else:
            if args.factor is not None:
                raise UsageError("--factor applies to contraction only")
            factor = Fraction(1)
            report = verify_lipschitz(args.max_len, workers=jobs)
        spot = _spot_check(args.kind, args.max_len, factor, args.seed)
        doc = report.to_json()
        doc["spot_check"] = spot
        lines = [
            f"{args.kind}: {'PASS' if report.passed else 'FAIL'}",
            f"pairs checked: {report.pairs_checked} (words of length <= {args.max_len})",
            f"factor: {report.factor_num}/{report.factor_den}",
            f"max ratio: {report.max_ratio_num}/{report.max_ratio_den}"
            + (" (attained)" if report.max_ratio_attained else ""),
            f"failures: {report.failures}",
            f"spot check: {len(spot['failures'])} of {spot['pairs']} sampled pairs fail",
        ]
        label = "witnesses" if report.passed else "failing pairs"
        shown = [f"({format_word(u)}, {format_word(v)})" for u, v in report.witnesses[: args.show]]
        lines.append(f"{label}: " + ", ".join(shown))
        passed = report.passed and not spot["failures"]
    if args.report:
        Path(args.report).write_text(report.dumps(), encoding="utf-8")
        lines.append(f"report written to {args.report}")
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK if passed else EXIT_FAIL


# -- solve ----------------------------------------------------------------------------


def _parse_point(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        raise UsageError(f"cannot parse --x0 {text!r}") from None


def cmd_solve(args) -> int:
    try:
        ex = get_space(args.space)
    except (KeyError, OSError, ValueError) as exc:
        raise UsageError(str(exc).strip("'\"")) from None
    gamma = ex.gamma if args.gamma is None else args.gamma
    if not 0 < gamma < 1:
        raise UsageError("--gamma must lie in (0, 1)")
    if args.eps <= 0:
        raise UsageError("--eps must be positive")
    x0 = ex.x0 if args.x0 is None else _parse_point(args.x0)
    if ex.kind != "finite":
        if isinstance(x0, bool) or not isinstance(x0, (int, float)):
            raise UsageError("--x0 must be a number for this space")
        x0 = float(x0)
    trace = SolverTrace()
    doc = {"space": ex.name, "gamma": gamma, "eps": args.eps, "x0": x0}
    status = EXIT_OK
    try:
        if ex.kind == "banach":
            point = banach(ex.space, ex.maps[0], gamma, x0, args.eps, trace=trace)
            disp = [ex.space.distance(point, ex.maps[0](point))]
            trace.outcome = {"status": "converged", "point": point}
        elif ex.kind == "pair":
            point, trace = common_fixed_point_pair(ex.space, ex.maps[0], ex.maps[1], gamma, x0,
                                                   tol=args.eps)
            disp = [ex.space.distance(point, f(point)) for f in ex.maps]
        elif ex.kind == "uniform":
            family = ContractiveFamily(ex.space, ex.maps, gamma, commuting=True)
            cert = bounded_uc_common_fixed_point(family, ex.modulus, ex.diameter, args.eps, x0)
            point, disp = cert.point, list(cert.displacements)
            doc["plan"] = cert.details["plan"]
            doc["recheck"] = cert.recheck(family)
            if not (cert.certified and doc["recheck"]):
                status = EXIT_FAIL
            trace.outcome = {"status": "certificate", "certificate": cert.to_json()}
        else:
            family = ContractiveFamily(ex.space, ex.maps, gamma, commuting=True)
            point = finite_space_common_fixed_point(ex.points, family)
            disp = list(family.displacements(point))
            trace.outcome = {"status": "converged", "point": point}
    except SOLVER_ERRORS as exc:
        if getattr(exc, "trace", None) is not None:
            trace = exc.trace
        if trace.outcome is None:
            trace.outcome = {"status": "failed", "reason": str(exc)}
        doc.update(status="failed", error=type(exc).__name__, reason=str(exc))
        _write_trace(args, trace)
        _emit(args, doc, f"solver failed: {type(exc).__name__}: {exc}")
        return EXIT_FAIL
    except NotClosedUnderMaps as exc:
        raise UsageError(str(exc)) from None
    _write_trace(args, trace)
    doc.update(status="ok" if status == EXIT_OK else "failed", point=point,
               displacements=disp, iterates=len(trace.iterates))
    lines = [f"{ex.name}: fixed point {point!r}",
             "displacements: " + ", ".join(f"{f.label}={dv:.3e}" for f, dv in zip(ex.maps, disp)),
             f"iterates: {len(trace.iterates)}"]
    _emit(args, doc, "\n".join(lines))
    return status


def _write_trace(args, trace: SolverTrace) -> None:
    if args.trace:
        Path(args.trace).write_text(trace.dumps(), encoding="utf-8")


# -- export ----------------------------------------------------------------------------


def cmd_export_tree(args) -> int:
    if not 1 <= args.depth <= MAX_EXPORT_DEPTH:
        raise UsageError(f"--depth must be between 1 and {MAX_EXPORT_DEPTH}")
    dot = to_dot(args.depth)
    if args.output:
        Path(args.output).write_text(dot, encoding="utf-8")
    if args.json:
        _emit(args, {"format": "dot", "depth": args.depth, "document": dot}, "")
    elif not args.output:
        sys.stdout.write(dot)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctrf",
        description="Exact checks on a contractive pair of word maps with no fixed point, "
        "and solvers for common fixed points.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--json", action="store_true", help="emit one JSON document on stdout")
    parser.add_argument("--seed", type=int, default=0, help="seed for sampled spot checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("period", help="minimal period and repeat blocks of a word")
    p.add_argument("word", help="word over {a,b}; 0 is the empty word")
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("dist", help="exact tree distance between two words")
    p.add_argument("u")
    p.add_argument("v")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("verify", help="exhaustive verification sweeps")
    p.add_argument("kind", choices=["contraction", "lipschitz", "no-fixed-point"])
    p.add_argument("--max-len", type=_positive_int, default=10,
                   help="longest word length covered (default 10)")
    p.add_argument("--max-comp", type=_positive_int, default=6,
                   help="longest composition checked by no-fixed-point (default 6)")
    p.add_argument("--factor", type=_fraction, default=None,
                   help="contraction factor p/q (default 3/4)")
    p.add_argument("--jobs", type=_positive_int, default=None,
                   help="worker threads (default: $CTRF_WORKERS or 1)")
    p.add_argument("--report", metavar="FILE", help="write the JSON report here")
    p.add_argument("--show", type=int, default=8, help="witnesses listed in text mode")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="common fixed point on a named example space")
    p.add_argument("--space", required=True, help="one of: " + ", ".join(space_names()))
    p.add_argument("--gamma", type=float, default=None, help="contraction constant override")
    p.add_argument("--eps", type=float, default=1e-9, help="target displacement")
    p.add_argument("--x0", default=None, help="starting point (JSON literal)")
    p.add_argument("--trace", metavar="FILE", help="write the solver trace as JSON")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("export-tree", help="weighted word tree as a DOT graph")
    p.add_argument("--depth", type=int, default=4, help=f"1..{MAX_EXPORT_DEPTH}")
    p.add_argument("--format", choices=["dot"], default="dot")
    p.add_argument("--output", metavar="FILE", help="write to FILE instead of stdout")
    p.set_defaults(func=cmd_export_tree)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ctrf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
