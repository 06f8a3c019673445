"""Command-line surface.

Subcommands: parse, count, enumerate, verify, random, code.  Input
files hold one SP expression per line ('#' comments), or an edge list
starting with a 'terminals s t' line.  Exit codes: 0 success, 1 usage
error, 2 invalid input, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .canonical import canonical_code, mirror_pairing, reversal_code
from .core import (
    EdgeSet,
    InvalidTreeError,
    Node,
    OrientedSP,
    SemiorientedSP,
    underlying_graph,
)
from .expr import (
    DisconnectedInput,
    NotSeriesParallel,
    RandomSpParams,
    SpParseError,
    random_sp,
    read_instances,
    serialize_sp,
)
from .generate import count_oriented, count_total, oriented_both, oriented_spanning
from .oracle import (
    FixBoth,
    FixSet,
    LimitExceeded,
    all_near_trees,
    all_spanning_trees,
    automorphisms,
    burnside_count,
    kirchhoff_count,
    orbit_partition,
)
from .semi import count_semioriented, semioriented_spanning

_INPUT_ERRORS = (
    SpParseError,
    InvalidTreeError,
    NotSeriesParallel,
    DisconnectedInput,
    ValueError,
    OSError,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="sptrees", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", help="echo normalized expressions")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_parse)

    p = sub.add_parser("count", help="count nonequivalent trees")
    p.add_argument("file")
    p.add_argument("--mode", choices=("oriented", "semioriented", "total"), required=True)
    p.add_argument("--near", action="store_true")
    p.set_defaults(handler=_cmd_count)

    p = sub.add_parser("enumerate", help="list nonequivalent trees")
    p.add_argument("file")
    p.add_argument("--mode", choices=("oriented", "semioriented"), required=True)
    p.add_argument("--near", action="store_true")
    p.add_argument("--format", choices=("text", "records"), default="text")
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("verify", help="compare fast paths against the oracle")
    p.add_argument("file")
    p.add_argument("--limit", type=int, default=12)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("random", help="emit a random instance")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--children", type=int, default=3)
    p.add_argument("--leaf-bias", type=float, default=0.4)
    p.set_defaults(handler=_cmd_random)

    p = sub.add_parser("code", help="print canonical and reversal codes")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_code)

    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except LimitExceeded as exc:
        print(f"refusing oracle run: {exc}", file=sys.stderr)
        return 2
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


def _load(path: str) -> list[Node]:
    with open(path, encoding="utf-8") as handle:
        trees = read_instances(handle.read())
    if not trees:
        raise ValueError(f"{path}: no instances found")
    return trees


def _cmd_parse(args) -> int:
    for tree in _load(args.file):
        print(serialize_sp(tree))
    return 0


def _cmd_count(args) -> int:
    for tree in _load(args.file):
        if args.mode == "oriented":
            pair = count_oriented(OrientedSP(tree))
            print(pair.near if args.near else pair.spanning)
        elif args.mode == "total":
            pair = count_total(OrientedSP(tree))
            print(pair.near if args.near else pair.spanning)
        else:
            if args.near:
                raise _UsageError("--near is not supported with --mode semioriented")
            print(count_semioriented(SemiorientedSP(tree)))
    return 0


def edge_line(graph, es: EdgeSet) -> str:
    tokens = sorted(f"{u}-{v}" for u, v in (graph.edges[i] for i in es.indices()))
    return ",".join(tokens)


def _cmd_enumerate(args) -> int:
    for tree in _load(args.file):
        graph = underlying_graph(tree)
        if args.mode == "oriented":
            if args.near:
                trees = oriented_both(OrientedSP(tree))[1]
                kind = "near"
            else:
                trees = oriented_spanning(OrientedSP(tree))
                kind = "spanning"
        else:
            if args.near:
                raise _UsageError("--near is not supported with --mode semioriented")
            trees = semioriented_spanning(SemiorientedSP(tree))
            kind = "spanning"
        for index, es in enumerate(trees):
            if args.format == "text":
                print(edge_line(graph, es))
            else:
                record = {
                    "index": index,
                    "edges": sorted(
                        f"{u}-{v}" for u, v in (graph.edges[i] for i in es.indices())
                    ),
                    "mode": args.mode,
                    "kind": kind,
                }
                print(json.dumps(record, sort_keys=True))
    return 0


def _cmd_random(args) -> int:
    params = RandomSpParams(
        seed=args.seed,
        max_depth=args.depth,
        max_children=args.children,
        leaf_bias=args.leaf_bias,
    )
    print(serialize_sp(random_sp(params)))
    return 0


def _cmd_code(args) -> int:
    for tree in _load(args.file):
        print(f"{canonical_code(tree)} {reversal_code(tree)}")
    return 0


def _orbit_lookup(report):
    lookup = {}
    for orbit_id, (_, members) in enumerate(report.orbits):
        for member in members:
            lookup[member] = orbit_id
    return lookup


def verify_instance(tree: Node, limit: int = 12) -> tuple[bool, str]:
    """Run every fast-versus-oracle agreement check on one instance.

    Returns (ok, summary); raises LimitExceeded instead of degrading
    when the instance is too large for the oracle.
    """
    graph = underlying_graph(tree)
    s, t = tree.source, tree.target
    failures = []

    tau = count_total(OrientedSP(tree)).spanning
    spanning = all_spanning_trees(graph, limit=limit)
    kirchhoff = kirchhoff_count(graph)
    if not tau == kirchhoff == len(spanning):
        failures.append(
            f"total mismatch: recurrence={tau} kirchhoff={kirchhoff} "
            f"brute={len(spanning)}"
        )

    aut_or = automorphisms(graph, FixBoth(s, t), limit=limit)
    aut_semi = automorphisms(graph, FixSet(s, t), limit=limit)

    counts = count_oriented(OrientedSP(tree))
    fast_sp, fast_nt = oriented_both(OrientedSP(tree))
    report_sp = orbit_partition(spanning, aut_or, graph)
    failures.extend(
        _orbit_agreement("oriented spanning", fast_sp, report_sp, counts.spanning)
    )

    near = all_near_trees(graph, s, t, limit=limit)
    report_nt = orbit_partition(near, aut_or, graph)
    failures.extend(_orbit_agreement("oriented near", fast_nt, report_nt, counts.near))

    fast_semi = semioriented_spanning(SemiorientedSP(tree))
    semi_count = count_semioriented(SemiorientedSP(tree))
    report_semi = orbit_partition(spanning, aut_semi, graph)
    failures.extend(
        _orbit_agreement("semioriented spanning", fast_semi, report_semi, semi_count)
    )
    if burnside_count(spanning, aut_semi, graph) != report_semi.orbit_count:
        failures.append("Burnside count disagrees with the orbit partition")

    exchange_exists = len(aut_semi) == 2 * len(aut_or)
    pairing = mirror_pairing(tree)
    if exchange_exists != (pairing is not None):
        failures.append(
            f"mirror pairing {'found' if pairing else 'missing'} but "
            f"|Aut_semi|={len(aut_semi)}, |Aut_or|={len(aut_or)}"
        )

    summary = (
        f"total={tau} oriented={len(fast_sp)} near={len(fast_nt)} "
        f"semi={len(fast_semi)} aut_or={len(aut_or)} aut_semi={len(aut_semi)}"
    )
    if failures:
        return False, f"{summary}; " + "; ".join(failures)
    return True, summary


def _orbit_agreement(label, fast: list[EdgeSet], report, expected_count: int):
    failures = []
    if not len(fast) == report.orbit_count == expected_count:
        failures.append(
            f"{label}: fast={len(fast)} orbits={report.orbit_count} "
            f"count={expected_count}"
        )
        return failures
    lookup = _orbit_lookup(report)
    hit = set()
    for es in fast:
        orbit_id = lookup.get(es)
        if orbit_id is None:
            failures.append(f"{label}: emitted set is not a valid oracle tree")
            return failures
        if orbit_id in hit:
            failures.append(f"{label}: two emitted trees share an orbit")
            return failures
        hit.add(orbit_id)
    if len(hit) != report.orbit_count:
        failures.append(f"{label}: some orbit was never hit")
    return failures


def _cmd_verify(args) -> int:
    any_fail = False
    for tree in _load(args.file):
        ok, summary = verify_instance(tree, limit=args.limit)
        print(f"{'PASS' if ok else 'FAIL'} ({summary})")
        if not ok:
            any_fail = True
    return 3 if any_fail else 0
