"""Three-stage labeling of a minimum dominating set of G x H, with per-instance checks.

Product vertices are flat indices from :class:`ProductIndexMap` (``h * nG + g``).
A label is a sorted tuple of cell indices: ``(i,)`` is a singleton label and
``(i, j)`` with ``i < j`` a paired label.

Every step records what it checked in a :class:`ProofTrace`.  Failed checks
are data, never exceptions: a failure marked critical is a concrete instance
on which a step of the two-thirds argument does not go through.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field

from .decomposition import CellDecomposition, chamber, decompose
from .domination import CheckRecord, PreconditionError, dominated_by, domination_number, is_independent
from .graph import Graph, GraphInputError, ProductIndexMap, bits, cartesian_product, find_claw

Label = tuple[int, ...]
STAGES = ("L1", "L2", "L3")


def one(i: int) -> Label:
    return (i,)


def pair(i: int, j: int) -> Label:
    if i == j:
        raise ValueError("pair label needs distinct indices")
    return (i, j) if i < j else (j, i)


def is_pair(label: Label) -> bool:
    return len(label) == 2


@dataclass
class LabelState:
    labels: dict[int, Label]
    stage: str

    def pairs(self) -> list[int]:
        return [p for p, lab in self.labels.items() if is_pair(lab)]

    def copy(self, stage: str) -> "LabelState":
        return LabelState(dict(self.labels), stage)


@dataclass
class VerticalTable:
    undominated_cells: list[tuple[int, ...]]  # per h: I_h
    vertically_dominated: int                  # product mask of vertically dominated vertices


@dataclass
class FiberTrace:
    h: int
    I_h: tuple[int, ...]
    S1_h: tuple[int, ...] = ()       # product vertices still carrying a pair after L3
    J1_h: tuple[int, ...] = ()
    I1_h: tuple[int, ...] = ()
    E_h: tuple[int, ...] = ()
    E_feasible: bool = True
    vertical_dominators_empty: bool = True
    E_private_singletons: bool = True

    def to_dict(self, pm: ProductIndexMap) -> dict:
        g_of = lambda ps: [pm.unflat(p)[0] for p in ps]  # noqa: E731
        return {
            "h": self.h, "I_h": list(self.I_h), "S1_h": g_of(self.S1_h), "J1_h": list(self.J1_h),
            "I1_h": list(self.I1_h), "E_h": g_of(self.E_h), "E_feasible": self.E_feasible,
            "vertical_dominators_empty": self.vertical_dominators_empty,
            "E_private_singletons": self.E_private_singletons,
        }


@dataclass
class ProofTrace:
    k: int
    gamma_H: int
    size_D: int
    pm: ProductIndexMap
    states: dict[str, LabelState] = field(default_factory=dict)
    fibers: list[FiberTrace] = field(default_factory=list)
    label_classes: dict[int, tuple[int, ...]] = field(default_factory=dict)
    projection_dominates: dict[int, bool] = field(default_factory=dict)
    sum_label_classes: int = 0
    check_counts: Counter = field(default_factory=Counter)
    failures: list[CheckRecord] = field(default_factory=list)

    def check(self, name: str, ok: bool, critical: bool = True, **details) -> bool:
        self.check_counts[name] += 1
        if not ok:
            self.failures.append(CheckRecord(name, False, critical, details))
        return ok

    @property
    def violations(self) -> list[CheckRecord]:
        return [f for f in self.failures if f.critical]

    @property
    def advisories(self) -> list[CheckRecord]:
        return [f for f in self.failures if not f.critical]

    @property
    def pair_total(self) -> int:
        return sum(len(f.S1_h) for f in self.fibers)

    def to_dict(self) -> dict:
        coords = lambda p: "%d,%d" % self.pm.unflat(p)  # noqa: E731
        return {
            "k": self.k, "gamma_H": self.gamma_H, "size_D": self.size_D,
            "sum_label_classes": self.sum_label_classes, "pair_total": self.pair_total,
            "labels": {st: {coords(p): list(lab) for p, lab in sorted(s.labels.items())}
                       for st, s in self.states.items()},
            "fibers": [f.to_dict(self.pm) for f in self.fibers],
            "label_classes": {str(i): [coords(p) for p in ps] for i, ps in self.label_classes.items()},
            "projection_dominates": {str(i): v for i, v in self.projection_dominates.items()},
            "check_counts": dict(sorted(self.check_counts.items())),
            "failures": [{"name": f.name, "critical": f.critical, "details": f.details}
                         for f in self.failures],
        }


class Instance:
    """Everything the stages share about one (G, Gamma, H, D) instance."""

    def __init__(self, G: Graph, dec: CellDecomposition, H: Graph, D: int):
        self.G, self.dec, self.H = G, dec, H
        self.P, self.pm = cartesian_product(G, H)
        self.D = D
        self.closedP = [self.P.closed_mask(p) for p in range(self.P.n)]

    def fiber_D(self, h: int) -> list[int]:
        return list(bits(self.D & self.pm.fiber_mask(h)))

    def shared_in_D(self, S: frozenset[int], h: int) -> list[int]:
        return list(bits(self.D & self.pm.lift(self.dec.shared.get(S, 0), h)))


def classify_vertical(G: Graph, dec: CellDecomposition, H: Graph, D: int) -> VerticalTable:
    P, pm = cartesian_product(G, H)
    undom = P.full_mask & ~dominated_by(P, D)
    if undom:
        g, h = pm.unflat(next(bits(undom)))
        raise GraphInputError(f"D does not dominate G x H: ({g}, {h}) undominated")
    rows = [pm.project_g(D, h) for h in range(H.n)]
    I = []
    vert = 0
    for h in range(H.n):
        reach = 0
        for h2 in bits(H.closed_mask(h)):
            reach |= rows[h2]
        vert |= pm.lift(reach, h)
        I.append(tuple(i for i in range(1, dec.k + 1) if not dec.cell(i) & reach))
    return VerticalTable(I, vert)


def labeling1(ctx: Instance, table: VerticalTable) -> LabelState:
    labels = {}
    for p in bits(ctx.D):
        g, h = ctx.pm.unflat(p)
        S = ctx.dec.index_sets[g]
        if len(S) == 1:
            labels[p] = one(next(iter(S)))
            continue
        if len(S) > 2:
            raise PreconditionError(f"D-vertex ({g}, {h}) lies in a shared class with {len(S)} indices",
                                    witness=(g, h, sorted(S)))
        inside = sorted(S & set(table.undominated_cells[h]))
        if len(inside) == 2:
            labels[p] = pair(*inside)
        elif len(inside) == 1:
            labels[p] = one(inside[0])
        else:
            labels[p] = one(min(S))
    return LabelState(labels, "L1")


def labeling2(ctx: Instance, state: LabelState, rng: random.Random | None = None) -> LabelState:
    out = state.copy("L2")
    labels = out.labels
    order = sorted(out.pairs())
    if rng is not None:
        rng.shuffle(order)
    for v in order:
        lab = labels[v]
        if not is_pair(lab):
            continue  # already resolved as someone else's witness
        _, h = ctx.pm.unflat(v)
        S = frozenset(lab)
        fibers = list(bits(ctx.H.adj[h]))
        if rng is not None:
            rng.shuffle(fibers)
        y = next((y for h2 in fibers for y in ctx.shared_in_D(S, h2)), None)
        if y is None:
            continue
        j1, j2 = lab
        ylab = labels[y]
        if ylab == one(j1):
            labels[v] = one(j2)
        elif ylab == one(j2):
            labels[v] = one(j1)
        else:
            a, b = (j1, j2) if rng is None or rng.random() < 0.5 else (j2, j1)
            labels[v], labels[y] = one(a), one(b)
    return out


def _l3_rule(x: Label, y: Label) -> tuple[Label, Label] | None:
    """New labels for an ordered pair ``(x, y)``, or None if no rule applies."""
    if is_pair(x) and x == y:
        return one(x[0]), one(x[1])
    common = set(x) & set(y)
    if not common:
        return None
    if is_pair(x) and is_pair(y):
        (c,) = common
        return x, one(next(i for i in y if i != c))
    if is_pair(y):
        return x, one(next(i for i in y if i != x[0]))
    if is_pair(x):
        return one(next(i for i in x if i != y[0])), y
    return None


def labeling3(ctx: Instance, state: LabelState, rng: random.Random | None = None) -> LabelState:
    out = state.copy("L3")
    labels = out.labels
    for h in range(ctx.H.n):
        verts = ctx.fiber_D(h)
        if rng is not None:
            rng.shuffle(verts)
        budget = sum(is_pair(labels[v]) for v in verts)
        while True:
            hit = None
            for x, y in itertools.combinations(verts, 2):
                new = _l3_rule(labels[x], labels[y])
                if new is not None:
                    hit = (x, y, new)
                    break
            if hit is None:
                break
            if budget == 0:
                raise RuntimeError(f"labeling 3 did not reach a fixpoint in fiber {h}")
            x, y, (lx, ly) = hit
            if rng is not None and labels[x] == labels[y] and rng.random() < 0.5:
                lx, ly = ly, lx
            labels[x], labels[y] = lx, ly
            budget -= 1
    return out


def _check_state(ctx: Instance, trace: ProofTrace, state: LabelState) -> None:
    st = state.stage
    trace.check("label_totality", set(state.labels) == set(bits(ctx.D)), stage=st)
    for p, lab in state.labels.items():
        g, h = ctx.pm.unflat(p)
        ok = (len(lab) in (1, 2) and list(lab) == sorted(set(lab))
              and set(lab) <= ctx.dec.index_sets[g])
        trace.check("label_subset", ok, stage=st, vertex=[g, h], label=list(lab))


def _check_post_l2(ctx: Instance, trace: ProofTrace, state: LabelState) -> None:
    for v in state.pairs():
        _, h = ctx.pm.unflat(v)
        S = frozenset(state.labels[v])
        witnesses = [ctx.pm.unflat(y) for h2 in bits(ctx.H.adj[h]) for y in ctx.shared_in_D(S, h2)]
        trace.check("post_l2_witness_free", not witnesses,
                    vertex=list(ctx.pm.unflat(v)), label=sorted(S), witnesses=witnesses)


def _check_post_l3(ctx: Instance, trace: ProofTrace, state: LabelState) -> None:
    for h in range(ctx.H.n):
        labs = [state.labels[v] for v in ctx.fiber_D(h)]
        pairs = [lab for lab in labs if is_pair(lab)]
        singles = {lab[0] for lab in labs if not is_pair(lab)}
        used = [i for lab in pairs for i in lab]
        ok = len(used) == len(set(used)) and not set(used) & singles
        trace.check("post_l3_disjoint", ok, h=h, pairs=[list(p) for p in pairs], singles=sorted(singles))


def fiber_sets(ctx: Instance, table: VerticalTable, state: LabelState, trace: ProofTrace) -> list[FiberTrace]:
    k = ctx.dec.k
    fibers = []
    for h in range(ctx.H.n):
        I_h = table.undominated_cells[h]
        S1 = tuple(v for v in ctx.fiber_D(h) if is_pair(state.labels[v]))
        J1 = tuple(sorted({i for v in S1 for i in state.labels[v]}))
        I1 = tuple(i for i in range(1, k + 1) if i not in I_h)
        ft = FiberTrace(h, I_h, S1, J1, I1)
        ch = ctx.pm.lift(chamber(ctx.dec, I_h), h)
        trace.check("fiber_S1_in_chamber", all(ch >> v & 1 for v in S1), h=h)
        trace.check("fiber_J1_size", len(J1) == 2 * len(S1), h=h, J1=list(J1), S1_size=len(S1))
        trace.check("fiber_J1_in_I", set(J1) <= set(I_h), h=h, J1=list(J1), I_h=list(I_h))
        fibers.append(ft)
    return fibers


def compute_E_set(ctx: Instance, ft: FiberTrace, state: LabelState) -> FiberTrace:
    """Smallest completion set from ``D^h`` inside the chamber of ``I1_h``.

    Together with the D-vertices in the chamber of ``J1_h`` (this fiber) and
    those directly above/below it in adjacent fibers, the set must dominate
    that chamber.  Ties go to the lexicographically least set.
    """
    pm, h = ctx.pm, ft.h
    cj = chamber(ctx.dec, ft.J1_h)
    target = pm.lift(cj, h)
    inside = ctx.D & target
    above = 0
    for h2 in bits(ctx.H.adj[h]):
        above |= ctx.D & pm.lift(cj, h2)
    ft.vertical_dominators_empty = above == 0
    residual = target & ~dominated_by(ctx.P, inside | above)
    cands = list(bits(ctx.D & pm.lift(chamber(ctx.dec, ft.I1_h), h)))
    ft.E_h, ft.E_feasible = (), residual == 0
    if residual:
        cover = {c: ctx.closedP[c] & residual for c in cands}
        for size in range(1, len(cands) + 1):
            hit = next((combo for combo in itertools.combinations(cands, size)
                        if not residual & ~_union(cover[c] for c in combo)), None)
            if hit is not None:
                ft.E_h, ft.E_feasible = hit, True
                break
    ft.E_private_singletons = all(
        ctx.dec.is_private(pm.unflat(p)[0]) and not is_pair(state.labels[p]) for p in ft.E_h)
    return ft


def _union(masks) -> int:
    m = 0
    for x in masks:
        m |= x
    return m


def verify_claims(ctx: Instance, trace: ProofTrace, state: LabelState) -> ProofTrace:
    k = ctx.dec.k
    for ft in trace.fibers:
        trace.check("E_feasible", ft.E_feasible, h=ft.h, J1=list(ft.J1_h))
        trace.check("claim2_E_at_least_S1", ft.E_feasible and len(ft.E_h) >= len(ft.S1_h),
                    h=ft.h, E=len(ft.E_h), S1=len(ft.S1_h))
        trace.check("vertical_dominators_empty", ft.vertical_dominators_empty, critical=False, h=ft.h)
        trace.check("E_private_singletons", ft.E_private_singletons, critical=False, h=ft.h)
    for i in range(1, k + 1):
        members = tuple(p for p, lab in sorted(state.labels.items()) if i in lab)
        trace.label_classes[i] = members
        proj = 0
        for p in members:
            proj |= 1 << ctx.pm.unflat(p)[1]
        ok = dominated_by(ctx.H, proj) == ctx.H.full_mask
        trace.projection_dominates[i] = ok
        trace.check("claim3_projection_dominates", ok, index=i,
                    projection=list(bits(proj)))
    total = sum(len(m) for m in trace.label_classes.values())
    trace.sum_label_classes = total
    trace.check("counting_identity", total == trace.size_D + trace.pair_total,
                sum=total, size_D=trace.size_D, pairs=trace.pair_total)
    trace.check("chain_lower", k * trace.gamma_H <= total, product=k * trace.gamma_H, sum=total)
    trace.check("chain_upper", 2 * total <= 3 * trace.size_D, sum=total, size_D=trace.size_D)
    return trace


def run_pipeline(G: Graph, gamma, H: Graph, D, gamma_H: int | None = None,
                 seed: int | None = None) -> ProofTrace:
    """Label ``D`` in three stages and check every intermediate claim.

    ``gamma`` is an independent minimum dominating set of claw-free ``G``;
    ``D`` (bitmask or iterable of flat indices) a minimum dominating set of
    the product.  ``seed`` shuffles every order-dependent choice in the
    second and third stages.
    """
    claw = find_claw(G)
    if claw is not None:
        raise PreconditionError("G must be claw-free", witness=claw)
    if not is_independent(G, list(gamma)):
        raise PreconditionError("gamma must be independent")
    dec = decompose(G, gamma)
    if not isinstance(D, int):
        D = sum(1 << p for p in set(D))
    if gamma_H is None:
        gamma_H = domination_number(H).value
    ctx = Instance(G, dec, H, D)
    rng = random.Random(seed) if seed is not None else None
    trace = ProofTrace(dec.k, gamma_H, D.bit_count(), ctx.pm)

    table = classify_vertical(G, dec, H, D)
    s1 = labeling1(ctx, table)
    s2 = labeling2(ctx, s1, rng)
    s3 = labeling3(ctx, s2, rng)
    trace.states = {"L1": s1, "L2": s2, "L3": s3}
    for s in (s1, s2, s3):
        _check_state(ctx, trace, s)
    counts = [len(s.pairs()) for s in (s1, s2, s3)]
    trace.check("pair_monotonicity", counts[0] >= counts[1] >= counts[2], counts=counts)
    _check_post_l2(ctx, trace, s2)
    _check_post_l3(ctx, trace, s3)
    trace.fibers = fiber_sets(ctx, table, s3, trace)
    for ft in trace.fibers:
        compute_E_set(ctx, ft, s3)
    return verify_claims(ctx, trace, s3)
