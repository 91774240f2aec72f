"""Command line: ``rulingset generate | run | verify``.

Exit codes: 0 ok, 1 verification failed, 2 derandomization precondition (or
enumeration budget) not met, 3 model violation, 64 unreadable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import generators
from .errors import (
    EnumerationBudgetExceeded,
    InvalidInput,
    InvalidVertex,
    ModelViolation,
    PreconditionFailed,
)
from .graph import (
    Graph,
    first_dependent_edge,
    farthest_unruled_vertex,
    is_two_ruling_set,
    max_degree,
    read_edge_list,
    write_edge_list,
)
from .ruling import RunConfig, deterministic_two_ruling_set

EXIT_OK, EXIT_VERIFY, EXIT_PRECONDITION, EXIT_MODEL, EXIT_PARSE = 0, 1, 2, 3, 64


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


def cmd_generate(args) -> int:
    try:
        if args.kind == "grid":
            g = generators.grid(args.rows, args.cols)
        elif args.kind == "gnp-capped":
            g = generators.gnp_capped(args.n, args.p, args.cap, args.seed)
        elif args.kind == "regular-ish":
            g = generators.regular_ish(args.n, args.d, args.seed)
        else:
            g = generators.star_cluster(args.hubs, args.degree, args.seed)
    except InvalidInput as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    write_edge_list(g, args.out)
    print(f"wrote {args.kind}: n={g.n} m={g.m} max_degree={max_degree(g)} -> {args.out}")
    return EXIT_OK


def _read_graph(path) -> Graph:
    try:
        return read_edge_list(path)
    except (OSError, InvalidInput, InvalidVertex, UnicodeDecodeError) as exc:
        raise _ParseError(f"{path}: {exc}") from None


class _ParseError(Exception):
    pass


def _read_set(path, g: Graph) -> list[int]:
    index = {str(g.label(v)): v for v in range(g.n)}
    members = []
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if line not in index:
                    raise _ParseError(f"{path}:{lineno}: unknown vertex {line!r}")
                members.append(index[line])
    except (OSError, UnicodeDecodeError) as exc:
        raise _ParseError(f"{path}: {exc}") from None
    return members


def build_report(g: Graph, result, config: RunConfig) -> dict:
    return {
        "degree_history": result.degree_history,
        "delta0": result.delta0,
        "degree_floor": result.degree_floor,
        "fallback": result.fallback.as_dict(),
        "iterations": result.iterations,
        "m": g.m,
        "mode": config.mode,
        "model_violations": len(result.transcript.violations()),
        "n": g.n,
        "per_iteration": [s.as_dict() for s in result.stats],
        "total_rounds": result.total_rounds,
        "u_size": len(result.members),
        "verified": is_two_ruling_set(g, result.members),
    }


def _config_from(args) -> RunConfig:
    try:
        return _make_config(args)
    except (ValueError, ZeroDivisionError, InvalidInput) as exc:
        raise _ParseError(f"bad option: {exc}") from None


def _make_config(args) -> RunConfig:
    return RunConfig(
        mode=args.mode,
        epsilon=Fraction(args.epsilon),
        c=args.c,
        k=args.k_override,
        w_exponent=args.w_exponent,
        chunk_bits=args.chunk_bits,
        degree_floor_const=args.degree_floor_const,
        fallback=args.fallback,
        budget=args.budget,
    )


def cmd_run(args) -> int:
    g = _read_graph(args.graph)
    config = _config_from(args)
    try:
        result = deterministic_two_ruling_set(g, config)
    except PreconditionFailed as exc:
        doc = {"error": "precondition", "report": exc.report.as_dict()}
        print(_dump(doc) if args.json else f"precondition failed: {exc}")
        return EXIT_PRECONDITION
    except EnumerationBudgetExceeded as exc:
        doc = {"error": "enumeration_budget", "needed": exc.needed, "budget": exc.budget}
        print(_dump(doc) if args.json else f"enumeration budget exceeded: {exc}")
        return EXIT_PRECONDITION
    except ModelViolation as exc:
        doc = {"error": type(exc).__name__, "message": str(exc), "round": exc.round_index,
               "machine": exc.machine, "words": exc.words}
        print(_dump(doc) if args.json else f"model violation: {exc}")
        return EXIT_MODEL
    report = build_report(g, result, config)
    if args.set_out:
        with open(args.set_out, "w", encoding="utf-8") as fh:
            fh.writelines(f"{g.label(v)}\n" for v in result.members)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for it, trace in enumerate(result.traces):
                for record in trace:
                    fh.write(json.dumps({"type": "chunk", "iteration": it, **record.as_dict()},
                                        sort_keys=True) + "\n")
            fh.write(result.transcript.to_jsonl())
    if args.json:
        print(_dump(report))
    else:
        print(f"n={g.n} m={g.m} delta0={result.delta0} iterations={result.iterations} "
              f"rounds={result.total_rounds} |U|={len(result.members)} verified={report['verified']}")
    return EXIT_OK if report["verified"] else EXIT_VERIFY


def cmd_verify(args) -> int:
    g = _read_graph(args.graph)
    members = _read_set(args.set, g)
    edge = first_dependent_edge(g, members)
    unruled = farthest_unruled_vertex(g, members)
    print(f"independent: {edge is None}")
    print(f"ruled: {unruled is None}")
    if edge is not None:
        print(f"violating edge: {g.label(edge[0])} {g.label(edge[1])}")
    if unruled is not None:
        print(f"violating vertex: {g.label(unruled)}")
    return EXIT_OK if edge is None and unruled is None else EXIT_VERIFY


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rulingset", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a generated graph as an edge list")
    gen.add_argument("kind", choices=generators.KINDS)
    gen.add_argument("--out", required=True)
    gen.add_argument("--seed", type=int, default=0, help="64-bit generator seed")
    gen.add_argument("--n", type=int, default=64)
    gen.add_argument("--p", type=float, default=0.1)
    gen.add_argument("--cap", type=int, default=32)
    gen.add_argument("--d", type=int, default=8)
    gen.add_argument("--hubs", type=int, default=4)
    gen.add_argument("--degree", type=int, default=16)
    gen.add_argument("--rows", type=int, default=8)
    gen.add_argument("--cols", type=int, default=8)
    gen.set_defaults(func=cmd_generate)

    run = sub.add_parser("run", help="compute a 2-ruling set inside the simulator")
    run.add_argument("graph")
    run.add_argument("--mode", choices=("mpc", "clique"), default="mpc")
    run.add_argument("--epsilon", default="1/3")
    run.add_argument("--c", type=float, default=1.0)
    run.add_argument("--k-override", type=int, default=None)
    run.add_argument("--w-exponent", type=int, default=4)
    run.add_argument("--chunk-bits", type=int, default=None)
    run.add_argument("--degree-floor-const", type=float, default=1.0)
    run.add_argument("--fallback", choices=("gather", "sweep"), default="gather")
    run.add_argument("--budget", type=int, default=1 << 24)
    run.add_argument("--trace", default=None, help="write seed-fixing and round records (JSON lines)")
    run.add_argument("--set-out", default=None, help="write the ruling set, one vertex per line")
    run.add_argument("--json", action="store_true")
    run.set_defaults(func=cmd_run)

    ver = sub.add_parser("verify", help="check that a vertex set is a 2-ruling set")
    ver.add_argument("graph")
    ver.add_argument("set")
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
