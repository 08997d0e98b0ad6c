"""Command line: ``spack chi|check|critical|census|verify|pin``.

Exit codes: 0 success or pass, 1 verification failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from pathlib import Path

from .census import (
    CensusError,
    IngestDiagnostic,
    ingest_graph6,
    pin_registry,
    run_census,
    verify_theorem,
)
from .criticality import is_vertex_critical
from .families import RegistryError, make_complete, make_cycle, make_g2k, make_path, registry_path, write_registry
from .graph import Graph, Graph6Error, all_pairs_distances, parse_graph6
from .packing import PackingSequence, SequenceError
from .solver import Coloring, chi_S, first_violation

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

_CONSTRUCTORS = {"C": make_cycle, "P": make_path, "K": make_complete, "G2K": make_g2k}


class UsageError(Exception):
    pass


def parse_graph_spec(text: str) -> Graph:
    """``C:9``, ``P:6``, ``K:4``, ``G2K:3`` or an inline graph6 string."""
    m = re.fullmatch(r"(C|P|K|G2K):(\d+)", text.strip(), flags=re.IGNORECASE)
    if m:
        return _CONSTRUCTORS[m.group(1).upper()](int(m.group(2)))
    return parse_graph6(text.strip())


def _graphs(args) -> list[Graph]:
    if (args.graph is None) == (args.file is None):
        raise UsageError("give exactly one of --graph/-g or --file/-f")
    if args.graph is not None:
        return [parse_graph_spec(args.graph)]
    diagnostics: list[IngestDiagnostic] = []
    graphs = list(ingest_graph6(args.file, fail_fast=args.fail_fast, diagnostics=diagnostics))
    for d in diagnostics:
        print(f"{args.file}:{d.line}: {d.message}", file=sys.stderr)
    return graphs


def _sequence(args) -> PackingSequence:
    if not args.seq:
        raise UsageError("--seq/-s is required")
    return PackingSequence.parse(args.seq[0])


def cmd_chi(args) -> int:
    s = _sequence(args)
    for g in _graphs(args):
        result = chi_S(g, s)
        print(f"{result.chi}: {result.witness.text()}".rstrip())
    return EXIT_OK


def cmd_check(args) -> int:
    s = _sequence(args)
    graphs = _graphs(args)
    if len(graphs) != 1:
        raise UsageError("check takes a single graph")
    g = graphs[0]
    coloring = Coloring.parse(args.coloring)
    if len(coloring) != g.n:
        raise UsageError(f"coloring has {len(coloring)} entries for {g.n} vertices")
    bad = first_violation(g, all_pairs_distances(g), s, coloring)
    if bad is None:
        print("valid")
        return EXIT_OK
    u, v = bad
    print(f"invalid: vertices {u} and {v} share color {coloring[u]} at distance "
          f"{all_pairs_distances(g)[u, v]} <= {s.value_at(coloring[u])}")
    return EXIT_FAIL


def cmd_critical(args) -> int:
    s = _sequence(args)
    for g in _graphs(args):
        verdict = is_vertex_critical(g, s)
        label = "critical" if verdict.is_critical else "not critical"
        print(f"{label}, chi {verdict.chi}")
        for d in verdict.per_vertex:
            print(f"  -{d.vertex:<3} {d.chi}  {d.witness.text()}")
    return EXIT_OK


def cmd_census(args) -> int:
    if args.cap is None or args.out is None:
        raise UsageError("census needs --cap and --out")
    if not args.seq:
        raise UsageError("census needs at least one --seq")
    sequences = [PackingSequence.parse(t) for t in args.seq]
    jobs = args.jobs or os.cpu_count() or 1
    records = run_census(args.cap, sequences, args.out, jobs=jobs)
    print(f"{len(records)} records written to {args.out}")
    for s in sequences:
        key = s.text()
        crit = [r for r in records if any(x.sequence == key and x.critical for x in r.per_sequence)]
        print(f"  {key}: {len(crit)} vertex-critical")
    return EXIT_OK


def cmd_verify(args) -> int:
    cap = args.cap if args.cap is not None else 8
    report = verify_theorem(args.class_name, args.s4, cap, jobs=args.jobs or 1)
    print(report.text())
    if args.out:
        Path(args.out).write_text(json.dumps(report.summary(), indent=2) + "\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_pin(args) -> int:
    cap = args.cap if args.cap is not None else 8
    entries = pin_registry(cap, s4=args.s4 or 3, jobs=args.jobs or 1)
    out = Path(args.out) if args.out else registry_path()
    write_registry(entries, out)
    print(f"{len(entries)} registry entries written to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", "-g", help="graph6 string or C:n, P:n, K:n, G2K:k")
    common.add_argument("--file", "-f", help="graph6 file, one graph per line")
    common.add_argument("--seq", "-s", action="append", help="packing sequence, e.g. 1,3^2+")
    common.add_argument("--cap", type=int, help="order cap")
    common.add_argument("--s4", type=int, help="fourth term for class S1-3-3")
    common.add_argument("--out", help="output path")
    common.add_argument("--jobs", type=int, help="worker processes")
    common.add_argument("--fail-fast", action="store_true", help="stop at the first bad graph6 line")
    common.add_argument("--verbose", "-v", action="store_true")

    parser = argparse.ArgumentParser(prog="spack", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("chi", parents=[common], help="S-packing chromatic number and witness").set_defaults(fn=cmd_chi)
    p = sub.add_parser("check", parents=[common], help="validate a coloring")
    p.add_argument("coloring", help='colors in vertex order, e.g. "1 2 1 3"')
    p.set_defaults(fn=cmd_check)
    sub.add_parser("critical", parents=[common], help="vertex-criticality verdict").set_defaults(fn=cmd_critical)
    sub.add_parser("census", parents=[common], help="classify all connected graphs").set_defaults(fn=cmd_census)
    p = sub.add_parser("verify", parents=[common], help="check a characterization by census")
    p.add_argument("class_name", help="S1-4bar, S1-3-4bar or S1-3-3")
    p.set_defaults(fn=cmd_verify)
    sub.add_parser("pin", parents=[common], help="rebuild the sporadic registry").set_defaults(fn=cmd_pin)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.fn(args)
    except (UsageError, Graph6Error, SequenceError, ValueError, CensusError, RegistryError, OSError) as exc:
        print(f"spack: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
