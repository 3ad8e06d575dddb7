"""``freelip`` command-line front end.

Exit codes: 0 success, 1 metric axiom violation, 2 input or usage error,
3 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from .extremal import classify, d_pq, molecule_face, oracle_certificate, verify_dpq_on_segment, verify_face_on_segment
from .formats import (
    FormatError,
    Report,
    classification_to_dict,
    dump_space,
    element_from_dict,
    function_to_dict,
    graph_from_dict,
    load_space,
    space_summary,
)
from .freespace import norm_dual, norm_primal
from .invariants import GENERATOR_KINDS, check_space
from .metric import FiniteMetricSpace, MetricAxiomError, gen_random, gen_tree, gen_ultrametric, segment
from .rational import format_rational

EXIT_OK, EXIT_AXIOM, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3
DEFAULT_ORACLE_POINTS = 8

ORACLE_HELP = (
    "also run the brute-force vertex oracle; it solves one LP per pair over all "
    "n(n-1) molecules, so it is refused above FREELIP_MAX_ORACLE_POINTS "
    f"(default {DEFAULT_ORACLE_POINTS}) points unless --force is given"
)


class UsageError(Exception):
    pass


def oracle_limit() -> int:
    raw = os.environ.get("FREELIP_MAX_ORACLE_POINTS")
    if raw is None:
        return DEFAULT_ORACLE_POINTS
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"FREELIP_MAX_ORACLE_POINTS must be an integer, got {raw!r}") from None


def _load(path: str) -> FiniteMetricSpace:
    try:
        return load_space(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}") from None


def _point(M: FiniteMetricSpace, label: str) -> int:
    try:
        return M.labels.index(label)
    except ValueError:
        raise UsageError(f"unknown point label {label!r}") from None


def _pair(M: FiniteMetricSpace, p: str, q: str) -> tuple[int, int]:
    i, j = _point(M, p), _point(M, q)
    if i == j:
        raise UsageError("a molecule needs two distinct points")
    return i, j


def _labels(M: FiniteMetricSpace, pts) -> list[str]:
    return sorted((M.labels[x] for x in pts), key=M.labels.index)


def _pairs(M: FiniteMetricSpace, pairs) -> list[list[str]]:
    return [[M.labels[x], M.labels[y]] for x, y in sorted(pairs)]


def _fmt_pairs(rows: list[list[str]]) -> str:
    return "{" + ", ".join(f"({a},{b})" for a, b in rows) + "}"


def cmd_validate(args) -> int:
    try:
        M = _load(args.file)
    except MetricAxiomError as e:
        print(f"invalid: {e}")
        return EXIT_AXIOM
    print(f"valid ({M.n} points, base {M.labels[M.base_index]})")
    return EXIT_OK


def cmd_classify(args) -> int:
    start = time.perf_counter()
    M = _load(args.file)
    if args.oracle and M.n > oracle_limit() and not args.force:
        raise UsageError(f"oracle refused on {M.n} points (limit {oracle_limit()}); pass --force")
    if args.all:
        pairs = sorted(M.ordered_pairs())
    else:
        try:
            p, q = args.pair.split(",")
        except ValueError:
            raise UsageError("--pair expects P,Q") from None
        pairs = [_pair(M, p.strip(), q.strip())]
    results = [classify(M, p, q, run_oracle=args.oracle) for p, q in pairs]
    disagreements = [c for c in results if c.oracle_extreme is not None and c.oracle_extreme != c.is_extreme]
    report = Report(
        "classify",
        space_summary(M),
        rows=[classification_to_dict(M, c) for c in results],
        checks={"oracle_agrees": not disagreements} if args.oracle else {},
        timing=round(time.perf_counter() - start, 6),
    )
    if args.json:
        print(report.to_json())
    else:
        for row in report.rows:
            p, q = row["pair"]
            line = f"({p},{q}) {'extreme' if row['is_extreme'] else 'not extreme'}"
            line += f"  segment={{{','.join(row['segment'])}}}"
            if row["strongly_exposed_constant"] is not None:
                line += f"  C*={row['strongly_exposed_constant']}"
            line += f"  exposed={'yes' if row['exposing_functional'] else 'no'}"
            if row["oracle_extreme"] is not None:
                agree = row["oracle_extreme"] == row["is_extreme"]
                line += f"  oracle={'extreme' if row['oracle_extreme'] else 'not extreme'}"
                line += "" if agree else "  DISAGREES"
            print(line)
    if disagreements:
        print("oracle disagrees with the segment criterion", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def _generate(kind: str, n: int, seed: int, scale: int = 10) -> FiniteMetricSpace:
    try:
        if kind == "random":
            return gen_random(n, seed, scale)
        if kind == "ultrametric":
            return gen_ultrametric(n, seed)
        if kind == "tree":
            return gen_tree(n, seed)
    except ValueError as e:
        raise UsageError(str(e)) from None
    raise UsageError(f"unknown generator kind {kind!r}")


def cmd_verify(args) -> int:
    start = time.perf_counter()
    limit = oracle_limit()
    if args.file:
        spaces = [(None, _load(args.file))]
    elif args.gen:
        if args.n is None:
            raise UsageError("--gen requires --n")
        spaces = [(args.gen, _generate(args.gen, args.n, args.seed + t, args.scale)) for t in range(args.trials)]
    else:
        raise UsageError("verify needs FILE or --gen KIND")
    totals = {"spaces": 0, "pairs": 0, "extreme_pairs": 0}
    max_c = None
    oracle_skipped = 0
    for t, (kind, M) in enumerate(spaces):
        rng = random.Random(args.seed * 1_000_003 + t)
        use_oracle = M.n <= limit or args.force
        oracle_skipped += not use_oracle
        res = check_space(M, rng, trials=args.elements, oracle=use_oracle, kind=kind)
        totals["spaces"] += 1
        totals["pairs"] += res.pairs
        totals["extreme_pairs"] += res.extreme_pairs
        if res.max_constant is not None and (max_c is None or res.max_constant > max_c):
            max_c = res.max_constant
        if res.failures:
            dump_space(M, args.dump)
            for f in res.failures[:20]:
                print(f"FAIL {f}")
            print(f"counterexample space written to {args.dump}")
            return EXIT_INVARIANT
    msg = f"ok: {totals['spaces']} spaces, {totals['pairs']} pairs, {totals['extreme_pairs']} extreme"
    if oracle_skipped:
        msg += f" (oracle skipped on {oracle_skipped} spaces above {limit} points)"
    print(msg)
    if args.gen in ("ultrametric", "tree") and max_c is not None:
        what = "over trivial-segment pairs" if args.gen == "tree" else "over all pairs"
        print(f"max observed C* {what}: {format_rational(max_c)}")
    print(f"elapsed {time.perf_counter() - start:.2f}s")
    return EXIT_OK


def cmd_norm(args) -> int:
    start = time.perf_counter()
    M = _load(args.file)
    try:
        obj = json.loads(Path(args.element).read_text(encoding="utf-8"))
    except OSError as e:
        raise UsageError(f"cannot read {args.element}: {e.strerror or e}") from None
    except json.JSONDecodeError as e:
        raise FormatError(f"{args.element}: invalid JSON ({e})") from None
    mu = element_from_dict(M, obj)
    dual, witness = norm_dual(mu)
    primal, flow = norm_primal(mu)
    report = Report(
        "norm",
        space_summary(M),
        rows=[
            {"from": M.labels[x], "to": M.labels[y], "amount": format_rational(t)}
            for (x, y), t in sorted(flow.items())
        ],
        checks={"primal_equals_dual": primal == dual},
        extra={
            "primal": format_rational(primal),
            "dual": format_rational(dual),
            "witness": function_to_dict(witness),
        },
        timing=round(time.perf_counter() - start, 6),
    )
    if args.json:
        print(report.to_json())
    else:
        print(f"primal (transport) = {format_rational(primal)}")
        print(f"dual (Lipschitz)   = {format_rational(dual)}")
        print(f"equal: {primal == dual}")
        print("witness: " + ", ".join(f"{k}={v}" for k, v in report.extra["witness"]["values"].items()))
        print("flow: " + (", ".join(f"{r['from']}->{r['to']}:{r['amount']}" for r in report.rows) or "(none)"))
    return EXIT_OK if primal == dual else EXIT_INVARIANT


def cmd_face(args) -> int:
    start = time.perf_counter()
    M = _load(args.file)
    p, q = _pair(M, args.p, args.q)
    seg = segment(M, p, q)
    dp = d_pq(M, p, q)
    face = molecule_face(M, p, q)
    checks = {
        "dpq_on_segment": verify_dpq_on_segment(M, p, q),
        "face_on_segment": verify_face_on_segment(M, p, q),
    }
    cert = oracle_certificate(M, p, q) if M.n <= oracle_limit() else None
    report = Report(
        "face",
        space_summary(M),
        rows=_pairs(M, face),
        checks=checks,
        extra={
            "pair": [args.p, args.q],
            "segment": _labels(M, seg),
            "d_pq": _pairs(M, dp),
            "certificate": None
            if cert is None
            else [[M.labels[x], M.labels[y], format_rational(w)] for (x, y), w in sorted(cert.items())],
        },
        timing=round(time.perf_counter() - start, 6),
    )
    if args.json:
        print(report.to_json())
    else:
        print(f"segment: {{{','.join(report.extra['segment'])}}}")
        print(f"d_pq: {_fmt_pairs(report.extra['d_pq'])}")
        print(f"face: {_fmt_pairs(report.rows)}")
        print(f"d_pq on segment: {checks['dpq_on_segment']}")
        print(f"face on segment: {checks['face_on_segment']}")
    return EXIT_OK if all(checks.values()) else EXIT_INVARIANT


def cmd_gen(args) -> int:
    if args.kind == "graph":
        if not args.graph:
            raise UsageError("gen graph needs --graph FILE")
        try:
            obj = json.loads(Path(args.graph).read_text(encoding="utf-8"))
        except OSError as e:
            raise UsageError(f"cannot read {args.graph}: {e.strerror or e}") from None
        except json.JSONDecodeError as e:
            raise FormatError(f"{args.graph}: invalid JSON ({e})") from None
        M = graph_from_dict(obj)
    else:
        if args.n is None:
            raise UsageError(f"gen {args.kind} needs --n")
        M = _generate(args.kind, args.n, args.seed, args.scale)
    dump_space(M, args.out)
    print(f"wrote {M.n}-point {args.kind} space to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freelip",
        description="Extreme molecules of Lipschitz-free spaces over finite metric spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the metric axioms of a space or graph file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", help="classify molecules u_pq (classification is symmetric in p, q)")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--pair", metavar="P,Q")
    g.add_argument("--all", action="store_true", help="every ordered pair, sorted")
    p.add_argument("--oracle", action="store_true", help=ORACLE_HELP)
    p.add_argument("--force", action="store_true", help="run the oracle above the point limit")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="run the invariant suite on a file or generated spaces")
    p.add_argument("file", nargs="?")
    p.add_argument("--gen", choices=GENERATOR_KINDS)
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int, default=10, help="number of generated spaces")
    p.add_argument("--elements", type=int, default=5, help="random elements and subset families per space")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=int, default=10, help="max edge weight for --gen random")
    p.add_argument("--force", action="store_true", help="run the oracle above the point limit")
    p.add_argument("--dump", default="freelip-counterexample.json", help="where to write a failing space")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("norm", help="primal and dual norm of an element")
    p.add_argument("file")
    p.add_argument("--element", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("face", help="segment, d_pq and the molecule face of a pair")
    p.add_argument("file")
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_face)

    p = sub.add_parser("gen", help="write a generated space file")
    p.add_argument("kind", choices=GENERATOR_KINDS + ("graph",))
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=int, default=10, help="max edge weight for random spaces")
    p.add_argument("--graph", help="graph file for kind 'graph'")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, FormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except MetricAxiomError as e:
        print(f"invalid space: {e}", file=sys.stderr)
        return EXIT_AXIOM
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
