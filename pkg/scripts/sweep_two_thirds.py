"""Sweep the corpus and tabulate the smallest gamma(GxH) / (gamma(G) gamma(H)) per factor size."""

import argparse
import logging
from collections import defaultdict

from clawbound.graph import parse_graph6
from clawbound.harness import RunConfig, run_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-ng", type=int, default=6)
    ap.add_argument("--max-nh", type=int, default=4)
    ap.add_argument("--all-min-d", action="store_true")
    ap.add_argument("--unsafe-caps", action="store_true")
    ap.add_argument("--out")
    args = ap.parse_args()
    logging.basicConfig(level=logging.WARNING)

    summary, records = run_corpus(RunConfig(args.max_ng, args.max_nh, all_min_d=args.all_min_d,
                                            unsafe_caps=args.unsafe_caps, out_dir=args.out))
    table = defaultdict(list)
    for r in records:
        table[parse_graph6(r.g6_G).n, parse_graph6(r.g6_H).n].append(r.ratio)
    print("nG nH pairs min_ratio vizing_tight")
    for (ng, nh), ratios in sorted(table.items()):
        print(f"{ng:2d} {nh:2d} {len(ratios):5d} {str(min(ratios)):>9} {sum(x == 1 for x in ratios):5d}")
    print(summary.to_dict())


if __name__ == "__main__":
    main()
