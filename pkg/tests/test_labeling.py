import itertools
import json

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clawbound.decomposition import chamber, decompose
from clawbound.domination import (PreconditionError, all_minimum_dominating_sets, domination_number,
                                  min_independent_dominating_set)
from clawbound.graph import Graph, GraphInputError, bits, cartesian_product, from_edge_list, is_connected
from clawbound.labeling import (Instance, LabelState, ProofTrace, classify_vertical, fiber_sets,
                                labeling1, labeling2, labeling3, run_pipeline, _l3_rule)

from conftest import cycle, path, star
from test_graph import graphs, to_nx

K1 = Graph(1, (0,))


def instance(G, gamma, H, D):
    return Instance(G, decompose(G, gamma), H, sum(1 << p for p in D))


def flat(G, g, h):
    return h * G.n + g


# vertical classification ----------------------------------------------------

def test_vertical_single_fiber():
    G = cycle(9)
    dec = decompose(G, (0, 3, 6))
    table = classify_vertical(G, dec, K1, 0b001001001)
    assert table.undominated_cells == [()]


def test_vertical_path_times_edge():
    # a-b-c-d with Gamma = (a, c); H = P_2; D = {(a,0), (c,0), (c,1)}.
    # (a,0) lies in Q_1 x N_H[1], so no cell is vertically undominated anywhere.
    G, H = path(4), path(2)
    D = [flat(G, 0, 0), flat(G, 2, 0), flat(G, 2, 1)]
    table = classify_vertical(G, decompose(G, (0, 2)), H, sum(1 << p for p in D))
    assert table.undominated_cells == [(), ()]
    assert table.vertically_dominated == (1 << 8) - 1 & ~(1 << flat(G, 1, 0)) & ~(1 << flat(G, 3, 0)) \
        & ~(1 << flat(G, 1, 1)) & ~(1 << flat(G, 3, 1))


def test_vertical_cube():
    # C_4 x P_2 with D = {(b,0), (d,1)}: both cells miss D in every column
    G, H = cycle(4), path(2)
    D = 1 << flat(G, 1, 0) | 1 << flat(G, 3, 1)
    table = classify_vertical(G, decompose(G, (0, 2)), H, D)
    assert table.undominated_cells == [(1, 2), (1, 2)]
    assert table.vertically_dominated == 1 << flat(G, 1, 0) | 1 << flat(G, 1, 1) \
        | 1 << flat(G, 3, 0) | 1 << flat(G, 3, 1)


def test_vertical_rejects_nondominating():
    with pytest.raises(GraphInputError, match="undominated"):
        classify_vertical(cycle(4), decompose(cycle(4), (0, 2)), path(2), 1)


def test_vertical_definition_property():
    G, H = cycle(6), path(3)
    dec = decompose(G, (0, 3))
    for D in all_minimum_dominating_sets(cartesian_product(G, H)[0]):
        table = classify_vertical(G, dec, H, D)
        for h in range(H.n):
            for i in (1, 2):
                hit = any(D >> flat(G, g, h2) & 1 for g in bits(dec.cell(i)) for h2 in bits(H.closed_mask(h)))
                assert (i not in table.undominated_cells[h]) == hit


# labeling 1 -----------------------------------------------------------------

C6_GAMMA = (0, 2, 4)  # P_{1,2} = {1}, P_{2,3} = {3}, P_{1,3} = {5}


@pytest.mark.parametrize("D,expected", [
    ([1, 4], {1: (1, 2), 4: (3,)}),          # both shared indices undominated; v in Q_3
    ([1, 2, 4], {1: (1,), 2: (2,), 4: (3,)}),  # only index 1 undominated
    ([0, 1, 2, 4], {0: (1,), 1: (1,), 2: (2,), 4: (3,)}),  # neither: lowest index
])
def test_labeling1_rules(D, expected):
    ctx = instance(cycle(6), C6_GAMMA, K1, D)
    state = labeling1(ctx, classify_vertical(ctx.G, ctx.dec, K1, ctx.D))
    assert state.stage == "L1" and state.labels == expected


# labeling 2 -----------------------------------------------------------------

def _cube():
    G = cycle(4)
    ctx = instance(G, (0, 2), path(2), [flat(G, 1, 0), flat(G, 3, 1)])
    return ctx, flat(G, 1, 0), flat(G, 3, 1)


def test_labeling2_pair_witness():
    ctx, v, y = _cube()
    s1 = labeling1(ctx, classify_vertical(ctx.G, ctx.dec, ctx.H, ctx.D))
    assert s1.labels == {v: (1, 2), y: (1, 2)}
    s2 = labeling2(ctx, s1)
    assert s2.labels == {v: (1,), y: (2,)}
    assert s1.labels[v] == (1, 2)  # earlier stage untouched


@pytest.mark.parametrize("ylab,vlab", [((1,), (2,)), ((2,), (1,))])
def test_labeling2_singleton_witness(ylab, vlab):
    ctx, v, y = _cube()
    s2 = labeling2(ctx, LabelState({v: (1, 2), y: ylab}, "L1"))
    assert s2.labels == {v: vlab, y: ylab}


def test_labeling2_no_witness():
    ctx = instance(cycle(4), (0, 2), K1, [1, 3])
    s1 = labeling1(ctx, classify_vertical(ctx.G, ctx.dec, K1, ctx.D))
    assert labeling2(ctx, s1).labels == s1.labels == {1: (1, 2), 3: (1, 2)}


# labeling 3 -----------------------------------------------------------------

def test_l3_rules():
    assert _l3_rule((1, 2), (1, 2)) == ((1,), (2,))
    assert _l3_rule((1, 2), (2, 3)) == ((1, 2), (3,))
    assert _l3_rule((1,), (1, 2)) == ((1,), (2,))
    assert _l3_rule((1, 2), (2,)) == ((1,), (2,))
    assert _l3_rule((1, 2), (3, 4)) is None
    assert _l3_rule((1,), (1,)) is None


def test_labeling3_identical_pairs():
    ctx = instance(cycle(4), (0, 2), K1, [1, 3])
    s3 = labeling3(ctx, LabelState({1: (1, 2), 3: (1, 2)}, "L2"))
    assert s3.labels == {1: (1,), 3: (2,)}


def test_labeling3_overlapping_pairs():
    ctx = instance(cycle(6), C6_GAMMA, K1, [1, 3, 5])
    s3 = labeling3(ctx, LabelState({1: (1, 2), 3: (2, 3), 5: (1, 3)}, "L2"))
    # (1,2)&(2,3): vertex 3 -> 3; then (1,2)&(1,3): vertex 5 -> 3
    assert s3.labels == {1: (1, 2), 3: (3,), 5: (3,)}


def test_labeling3_singleton_then_pair():
    ctx = instance(cycle(6), C6_GAMMA, K1, [0, 1])
    assert labeling3(ctx, LabelState({0: (1,), 1: (1, 2)}, "L2")).labels == {0: (1,), 1: (2,)}


# fiber sets and E -------------------------------------------------------------

def test_fiber_sets_collects_pair_components():
    G = cycle(8)
    ctx = instance(G, (0, 2, 4, 6), K1, [1, 3, 5, 7])
    table = classify_vertical(G, ctx.dec, K1, ctx.D)
    assert table.undominated_cells == [(1, 2, 3, 4)]
    state = LabelState({1: (1, 2), 3: (2,), 5: (3, 4), 7: (4,)}, "L3")
    trace = ProofTrace(4, 1, 4, ctx.pm)
    (ft,) = fiber_sets(ctx, table, state, trace)
    assert ft.J1_h == (1, 2, 3, 4) and ft.S1_h == (1, 5) and ft.I1_h == ()
    assert not trace.failures


def test_fiber_sets_single_fiber_product_has_no_pairs(clawfree_corpus):
    for gs in clawfree_corpus.values():
        for G in gs[:10]:
            gamma = min_independent_dominating_set(G).witness
            tr = run_pipeline(G, gamma, K1, sum(1 << v for v in gamma))
            assert all(not f.I_h and not f.S1_h and not f.E_h for f in tr.fibers)


def oracle_E(G, gamma, H, D, h, J1, I1):
    """Minimum completion set by direct enumeration over networkx sets."""
    dec = decompose(G, gamma)
    P = nx.cartesian_product(to_nx(G), to_nx(H))
    Dset = {(p % G.n, p // G.n) for p in D}
    CJ = set(bits(chamber(dec, J1)))
    targets = {(g, h) for g in CJ}
    helpers = {(g, h) for g in CJ if (g, h) in Dset} | \
              {(g, h2) for g in CJ for h2 in H_nbrs(H, h) if (g, h2) in Dset}
    cands = sorted((g, h) for g in bits(chamber(dec, I1)) if (g, h) in Dset)
    for k in range(len(cands) + 1):
        for combo in itertools.combinations(cands, k):
            covered = set()
            for x in helpers | set(combo):
                covered |= {x} | set(P[x])
            if targets <= covered:
                return [g for g, _ in combo]
    return None


def H_nbrs(H, h):
    return list(bits(H.adj[h]))


def test_E_set_on_seven_cycle():
    G = cycle(7)
    gamma = (0, 3, 5)
    tr = run_pipeline(G, gamma, K1, [0, 1, 4])
    (ft,) = tr.fibers
    assert tr.states["L3"].labels == {0: (1,), 1: (1,), 4: (2, 3)}
    assert (ft.I_h, ft.S1_h, ft.J1_h, ft.I1_h) == ((2, 3), (4,), (2, 3), (1,))
    assert list(ft.E_h) == oracle_E(G, gamma, K1, [0, 1, 4], 0, (2, 3), (1,)) == [1]
    assert ft.E_private_singletons and ft.vertical_dominators_empty
    assert tr.sum_label_classes == 4 and tr.size_D == 3
    assert not tr.failures


def test_E_set_matches_oracle_on_pairs():
    # every minimum D of small claw-free G x H with a surviving pair
    hit = 0
    for G in (cycle(7), path(7), cycle(6)):
        gamma = min_independent_dominating_set(G).witness
        for H in (K1, path(2)):
            P, _ = cartesian_product(G, H)
            for D in all_minimum_dominating_sets(P):
                tr = run_pipeline(G, gamma, H, D)
                for ft in tr.fibers:
                    if ft.S1_h:
                        hit += 1
                        want = oracle_E(G, gamma, H, list(bits(D)), ft.h, ft.J1_h, ft.I1_h)
                        assert [p % G.n for p in ft.E_h] == want
    assert hit >= 2


# whole pipeline ----------------------------------------------------------------

def test_pipeline_trivial():
    tr = run_pipeline(K1, (0,), K1, [0])
    assert not tr.failures and tr.sum_label_classes == tr.size_D == 1


def test_pipeline_path_times_edge():
    G, H = path(4), path(2)
    P, _ = cartesian_product(G, H)
    D = domination_number(P)
    assert D.value == 3
    tr = run_pipeline(G, (0, 2), H, D.witness)
    assert not tr.violations
    assert 2 * 2 * 1 <= 3 * tr.size_D


def test_pipeline_cycle_times_path():
    G, H = cycle(5), path(3)
    P, _ = cartesian_product(G, H)
    D = domination_number(P)
    assert D.value == 4
    gamma = min_independent_dominating_set(G).witness
    tr = run_pipeline(G, gamma, H, D.mask)
    assert not tr.failures
    assert tr.sum_label_classes - tr.size_D == tr.pair_total


def test_pipeline_preconditions():
    with pytest.raises(PreconditionError):
        run_pipeline(star(3), (0,), K1, [0])
    with pytest.raises(PreconditionError):
        run_pipeline(path(3), (0, 1), K1, [1])


def test_trace_json_roundtrips():
    tr = run_pipeline(cycle(7), (0, 3, 5), K1, [0, 1, 4])
    d = json.loads(json.dumps(tr.to_dict()))
    assert d["labels"]["L1"]["4,0"] == [2, 3]
    assert d["fibers"][0]["E_h"] == [1]
    assert d["check_counts"]["claim2_E_at_least_S1"] == 1


@st.composite
def clawfree_graphs(draw):
    # line graphs are claw-free
    base = draw(graphs(min_n=2, max_n=6))
    L = nx.convert_node_labels_to_integers(nx.line_graph(to_nx(base)))
    if L.number_of_nodes() == 0:
        return Graph(1, (0,))
    comp = max(nx.connected_components(L), key=len)
    keep = sorted(comp)
    pos = {v: i for i, v in enumerate(keep)}
    return from_edge_list(len(keep), [(pos[u], pos[v]) for u, v in L.subgraph(keep).edges()])


@settings(max_examples=60, deadline=None)
@given(clawfree_graphs(), graphs(max_n=4), st.integers(0, 2**32), st.data())
def test_pipeline_invariants(G, H, seed, data):
    if not is_connected(H) or G.n * H.n > 16:
        return
    gamma = min_independent_dominating_set(G).witness
    P, _ = cartesian_product(G, H)
    Ds = all_minimum_dominating_sets(P)
    D = data.draw(st.sampled_from(Ds))
    tr = run_pipeline(G, gamma, H, D, seed=seed)
    assert not tr.violations, tr.violations
    counts = [len(tr.states[s].pairs()) for s in ("L1", "L2", "L3")]
    assert counts == sorted(counts, reverse=True)
    for s in tr.states.values():
        assert set(s.labels) == set(bits(D))
    assert tr.sum_label_classes == tr.size_D + tr.pair_total
    assert len(gamma) * domination_number(H).value <= tr.sum_label_classes <= 3 * tr.size_D / 2
