"""Command-line front end.

Exit codes: 0 success, 2 parse or validation error, 3 verification mismatch,
4 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .adversarial import adversarial_value, decide_threshold
from .core import GraphError, WeightedGraph
from .fixed_horizon import EnumerationTooLarge, build_np_gadget, maxplus_power_value, value_iteration
from .formats import (FormatError, ResultRecord, format_graph, format_rational, inputs_digest, parse_distribution,
                      parse_graph, parse_rational)
from .instances import fig1, fig2, random_graph
from .oracle import BudgetExceeded, lasso_value
from .specified import DEFAULT_WITNESS_BOUND, specified_value
from .verify import VerifyBudgetError, run_verify

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH, EXIT_BUDGET = 0, 2, 3, 4

TRIANGLE = WeightedGraph(3, [(0, 1, 0), (1, 2, 0), (2, 0, 0)])


class Mismatch(RuntimeError):
    pass


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except FormatError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _load_graph(path: str) -> tuple[WeightedGraph, str]:
    text = _read(path)
    return parse_graph(text), text


def _check_start(graph: WeightedGraph, v0: int) -> None:
    if not 0 <= v0 < graph.vertex_count:
        raise GraphError(f"start vertex {v0} out of range [0, {graph.vertex_count})")


def _emit(record: ResultRecord, started: float) -> None:
    record.elapsed_ms = int((time.perf_counter() - started) * 1000)
    print(record.to_json())


def cmd_fixed(args) -> int:
    started = time.perf_counter()
    graph, text = _load_graph(args.graph)
    _check_start(graph, args.start)
    if args.horizon < 0:
        raise GraphError("horizon must be nonnegative")
    details = {"horizon": args.horizon, "method": args.method}
    value, witness = None, None
    if args.method in ("bellman", "both"):
        value, witness = value_iteration(graph, args.start, args.horizon)
        if witness.total(graph) != value:
            raise Mismatch(f"witness weighs {witness.total(graph)}, value is {value}")
    if args.method in ("maxplus", "both") and args.horizon >= 1:
        mp = maxplus_power_value(graph, args.start, args.horizon)
        if value is not None and mp != value:
            raise Mismatch(f"bellman {value} != maxplus {mp}")
        value = mp
    elif value is None:
        value = Fraction(0)  # the empty path
    digest = inputs_digest(text, f"fixed {args.start} {args.horizon} {args.method}")
    _emit(ResultRecord("fixed", digest, value, witness, details=details), started)
    return EXIT_OK


def cmd_specified(args) -> int:
    started = time.perf_counter()
    graph, text = _load_graph(args.graph)
    dist_text = _read(args.distribution)
    dist = parse_distribution(dist_text)
    _check_start(graph, args.start)
    value, witness = specified_value(graph, args.start, dist, args.witness_bound)
    details = {"support": len(dist.times), "expected_time": dist.expected_time}
    digest = inputs_digest(text, dist_text, f"specified {args.start}")
    _emit(ResultRecord("specified", digest, value, witness, details=details), started)
    return EXIT_OK


def cmd_adversarial(args) -> int:
    started = time.perf_counter()
    graph, text = _load_graph(args.graph)
    _check_start(graph, args.start)
    horizon = args.expected_horizon
    if horizon <= 0:
        raise GraphError("expected horizon must be positive")
    if args.decide_only is not None:
        level = args.decide_only
        answer, witness = decide_threshold(graph, args.start, horizon, level)
        digest = inputs_digest(text, f"decide {args.start} {horizon} {level}")
        details = {"expected_horizon": horizon, "threshold": level, "decision": answer}
        _emit(ResultRecord("adversarial-decide", digest, None, witness, details=details), started)
        return EXIT_OK
    value, plan = adversarial_value(graph, args.start, horizon)
    check = lasso_value(plan, graph, horizon)
    if check.value != value:
        raise Mismatch(f"plan {plan} is worth {check.value}, solver reported {value}")
    digest = inputs_digest(text, f"adversarial {args.start} {horizon}")
    record = ResultRecord("adversarial", digest, value, plan, attained=check.attained,
                          details={"expected_horizon": horizon})
    _emit(record, started)
    return EXIT_OK


def _write_output(out: str | None, text: str) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_gen(args) -> int:
    comments: list[str] = []
    sidecar = None
    if args.kind == "fig1":
        graph = fig1(args.n)
        comments.append(f"fig1 n={args.n}")
    elif args.kind == "fig2":
        graph = fig2(tuple(args.lengths))
        comments.append("fig2 loop lengths " + " ".join(map(str, args.lengths)))
    elif args.kind == "np-gadget":
        base = parse_graph(_read(args.base)) if args.base else TRIANGLE
        graph, horizon, threshold, start = build_np_gadget(base, args.v1, args.v2)
        sidecar = {"kind": "np-gadget", "v1": args.v1, "v2": args.v2, "horizon": horizon,
                   "threshold": format_rational(threshold), "start": start}
        comments.append(f"np-gadget v1={args.v1} v2={args.v2} horizon={horizon} "
                        f"threshold={format_rational(threshold)} start={start}")
    else:
        graph = random_graph(args.vertices, args.max_weight, args.density, args.seed)
        comments.append(f"random vertices={args.vertices} max_weight={args.max_weight} "
                        f"density={args.density} seed={args.seed}")
    _write_output(args.output, format_graph(graph, comments))
    if sidecar is not None:
        side_path = args.sidecar or (f"{args.output}.json" if args.output not in (None, "-") else None)
        if side_path:
            Path(side_path).write_text(json.dumps(sidecar, indent=2) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verify(args.corpus_size, args.max_vertices, args.seed)
    print(report.summary())
    if report.ok:
        print("all properties hold")
        return EXIT_OK
    for i, cex in enumerate(report.counterexamples):
        print(f"--- counterexample {i}")
        print(cex.dump())
        if args.dump_dir:
            d = Path(args.dump_dir)
            d.mkdir(parents=True, exist_ok=True)
            (d / f"cex{i:03d}.graph").write_text(cex.graph_text)
    return EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exphorizon", description="Exact planning under uncertain stopping times.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fixed", help="best path of exactly T edges")
    p.add_argument("graph")
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--method", choices=("bellman", "maxplus", "both"), default="both")
    p.set_defaults(func=cmd_fixed)

    p = sub.add_parser("specified", help="optimal expected utility for a given stopping distribution")
    p.add_argument("graph")
    p.add_argument("distribution")
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--witness-bound", type=int, default=DEFAULT_WITNESS_BOUND)
    p.set_defaults(func=cmd_specified)

    p = sub.add_parser("adversarial", help="worst case over stopping distributions with a given mean")
    p.add_argument("graph")
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--expected-horizon", type=_rational_arg, required=True)
    p.add_argument("--decide-only", type=_rational_arg, metavar="LAMBDA",
                   help="only decide whether some plan is worth at least LAMBDA")
    p.set_defaults(func=cmd_adversarial)

    p = sub.add_parser("gen", help="write an instance graph file")
    gen = p.add_subparsers(dest="kind", required=True)
    g = gen.add_parser("fig1")
    g.add_argument("--n", type=int, default=3)
    g = gen.add_parser("fig2")
    g.add_argument("--lengths", type=int, nargs=3, default=[6, 10, 15])
    g = gen.add_parser("np-gadget")
    g.add_argument("--base", help="base graph file (default: the triangle 0 -> 1 -> 2 -> 0)")
    g.add_argument("--v1", type=int, default=0)
    g.add_argument("--v2", type=int, default=1)
    g.add_argument("--sidecar", help="where to write horizon, threshold and start as JSON")
    g = gen.add_parser("random")
    g.add_argument("--vertices", type=int, required=True)
    g.add_argument("--max-weight", type=int, default=5)
    g.add_argument("--density", type=float, default=0.5)
    g.add_argument("--seed", type=int, default=0)
    for g in gen.choices.values():
        g.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="check solvers against oracles on a random corpus")
    p.add_argument("--corpus-size", type=int, default=50)
    p.add_argument("--max-vertices", type=int, default=4)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--dump-dir")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (VerifyBudgetError, EnumerationTooLarge, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        # parse errors, graph and distribution validation, bad generator parameters
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Mismatch as exc:
        print(f"mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
