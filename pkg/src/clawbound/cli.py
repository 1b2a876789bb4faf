"""Command-line entry point: ``clawbound <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .domination import PreconditionError, domination_number, min_independent_dominating_set
from .graph import (ConfigError, GraphInputError, cartesian_product, emit_edge_list, emit_graph6,
                    find_claw, read_graph_file)
from .harness import RunConfig, run_corpus, search_extremal, verify_pair


def _first_graph(path: str):
    graphs = read_graph_file(path)
    if not graphs:
        raise GraphInputError(f"{path} contains no graph")
    return graphs[0]


def cmd_gamma(args) -> int:
    for G in read_graph_file(args.graphfile):
        g = domination_number(G)
        i = min_independent_dominating_set(G)
        print(f"{emit_graph6(G)}\tgamma={g.value} witness={list(g.witness)}\t"
              f"i={i.value} witness={list(i.witness)}")
    return 0


def cmd_clawfree(args) -> int:
    status = 0
    for G in read_graph_file(args.graphfile):
        claw = find_claw(G)
        if claw is None:
            print(f"{emit_graph6(G)}\tclaw-free")
        else:
            print(f"{emit_graph6(G)}\tclaw center={claw[0]} leaves={list(claw[1])}")
            status = 1
    return status


def cmd_product(args) -> int:
    P, _ = cartesian_product(_first_graph(args.g), _first_graph(args.h))
    sys.stdout.write(emit_graph6(P) + "\n" if args.format == "g6" else emit_edge_list(P))
    return 0


def cmd_verify(args) -> int:
    cfg = RunConfig(all_min_d=args.all_min_d, shuffle_seed=args.shuffle_seed)
    report, traces = verify_pair(_first_graph(args.g), _first_graph(args.h), cfg)
    print(json.dumps(report.to_dict(), indent=2))
    if args.trace:
        with open(args.trace, "w") as fh:
            json.dump({"report": report.to_dict(), "traces": [t.to_dict() for t in traces]}, fh, indent=1)
    return 1 if report.critical else 0


def _corpus_config(args) -> RunConfig:
    return RunConfig(max_nG=args.max_ng, max_nH=args.max_nh, g6_path=args.g6,
                     all_min_d=args.all_min_d, shuffle_seed=args.shuffle_seed,
                     out_dir=getattr(args, "out", None), jobs=args.jobs,
                     unsafe_caps=args.unsafe_caps)


def cmd_corpus(args) -> int:
    summary, _ = run_corpus(_corpus_config(args))
    print(json.dumps(summary.to_dict(), indent=2))
    return 1 if summary.critical else 0


def cmd_search(args) -> int:
    ranked = search_extremal(_corpus_config(args))
    for rep in ranked[:args.top]:
        print(f"{rep.ratio}\t{rep.g6_G}\t{rep.g6_H}\tgamma=({rep.gammaG},{rep.gammaH},{rep.gammaGH})")
    return 1 if any(r.critical for r in ranked) else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clawbound", description=__doc__)
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gamma", help="domination and independent domination numbers")
    s.add_argument("graphfile")
    s.set_defaults(func=cmd_gamma)

    s = sub.add_parser("clawfree", help="claw-freeness with a claw witness")
    s.add_argument("graphfile")
    s.set_defaults(func=cmd_clawfree)

    s = sub.add_parser("product", help="emit the Cartesian product")
    s.add_argument("g")
    s.add_argument("h")
    s.add_argument("--format", choices=("g6", "el"), default="g6")
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("verify", help="bounds and labeling checks for one pair")
    s.add_argument("g")
    s.add_argument("h")
    s.add_argument("--all-min-d", action="store_true")
    s.add_argument("--shuffle-seed", type=int)
    s.add_argument("--trace", metavar="OUT_JSON")
    s.set_defaults(func=cmd_verify)

    for name, func in (("corpus", cmd_corpus), ("search", cmd_search)):
        s = sub.add_parser(name)
        s.add_argument("--max-ng", type=int, default=6)
        s.add_argument("--max-nh", type=int, default=4)
        s.add_argument("--g6", metavar="FILE")
        s.add_argument("--jobs", type=int, default=1)
        s.add_argument("--all-min-d", action="store_true")
        s.add_argument("--shuffle-seed", type=int)
        s.add_argument("--unsafe-caps", action="store_true")
        if name == "corpus":
            s.add_argument("--out", metavar="DIR")
        else:
            s.add_argument("--top", type=int, default=20)
        s.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (GraphInputError, ConfigError, PreconditionError, OSError) as exc:
        print(f"clawbound: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
