"""Exact domination and independent domination by branch and bound."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .graph import Graph, GraphInputError, bits, find_claw, mask_of

BRUTE_FORCE_CAP = 16


class PreconditionError(ValueError):
    """An operation was called on an input outside its contract."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class DominationResult:
    value: int
    witness: tuple[int, ...]
    node_count: int = 0

    @property
    def mask(self) -> int:
        return mask_of(self.witness)


@dataclass
class CheckRecord:
    """Outcome of a verification step.  A failing critical check is a finding."""

    name: str
    passed: bool
    critical: bool = True
    details: dict = field(default_factory=dict)


def _as_mask(G: Graph, S) -> int:
    if isinstance(S, int):
        if S >> G.n:
            raise GraphInputError("vertex set has members outside the graph")
        return S
    m = 0
    for v in S:
        if not 0 <= v < G.n:
            raise GraphInputError(f"vertex {v} outside [0, {G.n})")
        m |= 1 << v
    return m


def dominated_by(G: Graph, S: int) -> int:
    dom = 0
    for v in bits(S):
        dom |= G.adj[v] | 1 << v
    return dom


def is_dominating_set(G: Graph, S) -> bool:
    """``S`` may be an iterable of vertices or a bitmask."""
    return dominated_by(G, _as_mask(G, S)) == G.full_mask


def is_independent(G: Graph, S) -> bool:
    S = _as_mask(G, S)
    return all(not (G.adj[v] & S) for v in bits(S))


class _Search:
    def __init__(self, G: Graph, independent: bool):
        self.G = G
        self.independent = independent
        self.closed = [G.closed_mask(v) for v in range(G.n)]
        self.nodes = 0
        self.best: int | None = None
        self.best_size = G.n + 1

    def greedy(self) -> int:
        G, closed = self.G, self.closed
        chosen = dom = 0
        eligible = G.full_mask
        while dom != G.full_mask:
            undom = G.full_mask & ~dom
            best_v, best_gain = -1, -1
            for v in bits(eligible):
                gain = (closed[v] & undom).bit_count()
                if gain > best_gain:
                    best_v, best_gain = v, gain
            chosen |= 1 << best_v
            dom |= closed[best_v]
            eligible &= ~(1 << best_v)
            if self.independent:
                eligible &= ~closed[best_v]
        return chosen

    def lower_bound(self, undom: int, eligible: int) -> int:
        # undominated vertices with pairwise disjoint candidate sets need
        # pairwise distinct dominators
        closed = self.closed
        cands = sorted(((closed[v] & eligible).bit_count(), v) for v in bits(undom))
        used = 0
        lb = 0
        for _, v in cands:
            c = closed[v] & eligible
            if not c & used:
                used |= c
                lb += 1
        return lb

    def run(self, chosen: int, size: int, dom: int, eligible: int) -> None:
        self.nodes += 1
        full = self.G.full_mask
        if dom == full:
            if size < self.best_size:
                self.best, self.best_size = chosen, size
            return
        if size + 1 >= self.best_size:
            return
        undom = full & ~dom
        pick_c, pick_w = 0, self.G.n + 1
        for v in bits(undom):
            c = self.closed[v] & eligible
            w = c.bit_count()
            if w < pick_w:
                pick_c, pick_w = c, w
                if w <= 1:
                    break
        if pick_w == 0:
            return
        if size + self.lower_bound(undom, eligible) >= self.best_size:
            return
        for u in bits(pick_c):
            nxt_elig = eligible & ~(1 << u)
            if self.independent:
                nxt_elig &= ~self.closed[u]
            self.run(chosen | 1 << u, size + 1, dom | self.closed[u], nxt_elig)
            # later branches exclude earlier choices: each set is visited once
            eligible &= ~(1 << u)


def _solve(G: Graph, independent: bool) -> DominationResult:
    if G.n == 0:
        raise GraphInputError("domination number of the empty graph is undefined")
    s = _Search(G, independent)
    greedy = s.greedy()
    s.best, s.best_size = greedy, greedy.bit_count()
    s.run(0, 0, 0, G.full_mask)
    return DominationResult(s.best_size, tuple(bits(s.best)), s.nodes)


def domination_number(G: Graph) -> DominationResult:
    return _solve(G, independent=False)


def min_independent_dominating_set(G: Graph) -> DominationResult:
    return _solve(G, independent=True)


def brute_force_gamma(G: Graph, independent_only: bool = False) -> DominationResult:
    """Exhaustive oracle: smallest subsets first, lexicographic within a size."""
    if G.n > BRUTE_FORCE_CAP:
        raise PreconditionError(f"brute force refuses n={G.n} > cap {BRUTE_FORCE_CAP}")
    if G.n == 0:
        raise GraphInputError("domination number of the empty graph is undefined")
    closed = [G.closed_mask(v) for v in range(G.n)]
    full = G.full_mask
    tried = 0
    for k in range(G.n + 1):
        for combo in itertools.combinations(range(G.n), k):
            tried += 1
            dom = 0
            for v in combo:
                dom |= closed[v]
            if dom != full:
                continue
            if independent_only and any(G.has_edge(a, b) for a, b in itertools.combinations(combo, 2)):
                continue
            return DominationResult(k, combo, tried)
    raise AssertionError("unreachable: V(G) dominates")


def all_minimum_dominating_sets(G: Graph, gamma: int | None = None) -> list[int]:
    """Every dominating set of size ``gamma`` as bitmasks, in ascending combination order."""
    if G.n > 20:
        raise PreconditionError(f"enumeration of all minimum dominating sets refuses n={G.n} > 20")
    if gamma is None:
        gamma = domination_number(G).value
    closed = [G.closed_mask(v) for v in range(G.n)]
    full = G.full_mask
    out = []
    for combo in itertools.combinations(range(G.n), gamma):
        dom = 0
        for v in combo:
            dom |= closed[v]
        if dom == full:
            out.append(mask_of(combo))
    return out


def verify_allan_laskar(G: Graph) -> CheckRecord:
    """For claw-free ``G`` the independent domination number equals gamma."""
    claw = find_claw(G)
    if claw is not None:
        raise PreconditionError("graph contains an induced claw", witness=claw)
    g = domination_number(G)
    i = min_independent_dominating_set(G)
    return CheckRecord(
        "allan_laskar",
        g.value == i.value,
        details={"gamma": g.value, "i": i.value,
                 "gamma_witness": list(g.witness), "i_witness": list(i.witness)},
    )
