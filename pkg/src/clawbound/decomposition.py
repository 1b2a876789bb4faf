"""Cells, private/shared neighbor classes and chambers of an independent gamma-set.

Cell indices are 1-based: index ``i`` refers to ``gamma[i - 1]``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .domination import CheckRecord, PreconditionError, dominated_by, is_independent
from .graph import Graph, GraphInputError, bits, find_claw, mask_of


@dataclass(frozen=True)
class CellDecomposition:
    gamma: tuple[int, ...]
    private: tuple[int, ...]              # private[i - 1]: mask of P_i
    shared: dict[frozenset[int], int]     # index set S (|S| >= 2) -> mask of P_S
    index_sets: tuple[frozenset[int], ...]  # per vertex: {i} for Q_i, S for P_S

    @property
    def k(self) -> int:
        return len(self.gamma)

    def cell(self, i: int) -> int:
        """Mask of ``Q_i = {v_i} | P_i``."""
        self._check(i)
        return 1 << self.gamma[i - 1] | self.private[i - 1]

    def shared_class(self, *S: int) -> int:
        return self.shared.get(frozenset(S), 0)

    def is_gamma(self, v: int) -> bool:
        return v in self.gamma

    def is_private(self, v: int) -> bool:
        return len(self.index_sets[v]) == 1 and v not in self.gamma

    def is_shared(self, v: int) -> bool:
        return len(self.index_sets[v]) >= 2

    def _check(self, i: int) -> None:
        if not 1 <= i <= self.k:
            raise GraphInputError(f"cell index {i} outside [1, {self.k}]")

    def to_json(self) -> str:
        return json.dumps({
            "gamma": list(self.gamma),
            "private": {str(i + 1): list(bits(m)) for i, m in enumerate(self.private)},
            "shared": [{"indices": sorted(S), "vertices": list(bits(m))}
                       for S, m in sorted(self.shared.items(), key=lambda kv: sorted(kv[0]))],
        }, sort_keys=True)


def decompose(G: Graph, gamma) -> CellDecomposition:
    gamma = tuple(gamma)
    gmask = mask_of(gamma)
    if len(set(gamma)) != len(gamma) or any(not 0 <= v < G.n for v in gamma):
        raise GraphInputError(f"gamma {gamma} is not a list of distinct vertices of G")
    if not is_independent(G, gmask):
        u, v = next((u, v) for u, v in itertools.combinations(gamma, 2) if G.has_edge(u, v))
        raise GraphInputError(f"gamma is not independent: edge ({u}, {v})")
    undom = G.full_mask & ~dominated_by(G, gmask)
    if undom:
        raise GraphInputError(f"gamma does not dominate: vertex {next(bits(undom))} undominated")
    pos = {v: i + 1 for i, v in enumerate(gamma)}
    private = [0] * len(gamma)
    shared: dict[frozenset[int], int] = {}
    index_sets = []
    for v in range(G.n):
        if v in pos:
            index_sets.append(frozenset((pos[v],)))
            continue
        S = frozenset(pos[u] for u in bits(G.adj[v] & gmask))
        index_sets.append(S)
        if len(S) == 1:
            private[next(iter(S)) - 1] |= 1 << v
        else:
            shared[S] = shared.get(S, 0) | 1 << v
    return CellDecomposition(gamma, tuple(private), shared, tuple(index_sets))


def chamber(dec: CellDecomposition, I) -> int:
    """Mask of ``Q_I`` together with every shared class whose index set lies in ``I``."""
    I = frozenset(I)
    for i in I:
        dec._check(i)
    m = 0
    for i in I:
        m |= dec.cell(i)
    for S, vs in dec.shared.items():
        if S <= I:
            m |= vs
    return m


def verify_structural_observations(G: Graph, dec: CellDecomposition) -> list[CheckRecord]:
    """Shared classes have exactly two indices; no cross edges between
    index-disjoint shared classes or from a private class to a foreign shared class.
    """
    claw = find_claw(G)
    if claw is not None:
        raise PreconditionError("structural observations need a claw-free graph", witness=claw)
    big = {tuple(sorted(S)): list(bits(m)) for S, m in dec.shared.items() if len(S) >= 3}
    records = [CheckRecord("no_triple_shared", not big, details={"classes": big} if big else {})]

    pair_cross = []
    priv_cross = []
    for u, v in G.edges():
        Su, Sv = dec.index_sets[u], dec.index_sets[v]
        if dec.is_gamma(u) or dec.is_gamma(v):
            continue
        if len(Su) == 2 and len(Sv) == 2 and not Su & Sv:
            pair_cross.append((u, v))
        elif {len(Su), len(Sv)} == {1, 2} and not Su & Sv:
            priv_cross.append((u, v))
    records.append(CheckRecord("shared_pairs_nonadjacent", not pair_cross,
                               details={"edges": pair_cross} if pair_cross else {}))
    records.append(CheckRecord("private_shared_nonadjacent", not priv_cross,
                               details={"edges": priv_cross} if priv_cross else {}))
    return records
