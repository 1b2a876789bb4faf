"""How often paired labels survive each labeling stage, and where the
completion set E is nonempty.  Claim 2 is only exercised when a pair
survives the third stage, which first happens for seven-vertex G."""

import argparse
from collections import Counter

from clawbound.domination import all_minimum_dominating_sets, domination_number
from clawbound.graph import bits, cartesian_product, emit_graph6
from clawbound.harness import RunConfig, corpus_graphs
from clawbound.domination import min_independent_dominating_set
from clawbound.labeling import run_pipeline


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-ng", type=int, default=7)
    ap.add_argument("--max-nh", type=int, default=4)
    ap.add_argument("--all-d-limit", type=int, default=18)
    args = ap.parse_args()

    Gs, Hs, _ = corpus_graphs(RunConfig(args.max_ng, args.max_nh, unsafe_caps=True))
    stats: Counter = Counter()
    failures: Counter = Counter()
    for G in Gs:
        gamma = min_independent_dominating_set(G).witness
        for H in Hs:
            P, pm = cartesian_product(G, H)
            gH = domination_number(H).value
            Ds = all_minimum_dominating_sets(P) if P.n <= args.all_d_limit else [domination_number(P).mask]
            for D in Ds:
                tr = run_pipeline(G, gamma, H, D, gamma_H=gH)
                stats["labelings"] += 1
                for st in ("L1", "L2", "L3"):
                    stats[f"pairs_after_{st}"] += bool(tr.states[st].pairs())
                failures.update(f.name for f in tr.failures)
                for ft in tr.fibers:
                    if ft.S1_h:
                        stats["fibers_with_S1"] += 1
                        print(emit_graph6(G), emit_graph6(H), "D =", [pm.unflat(p) for p in bits(D)],
                              "h =", ft.h, "J1 =", ft.J1_h, "|E| =", len(ft.E_h))
    print(dict(stats))
    print("failed checks:", dict(failures))


if __name__ == "__main__":
    main()
