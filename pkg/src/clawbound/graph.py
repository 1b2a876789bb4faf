"""Simple undirected graphs on vertices 0..n-1, stored as neighbor bitmasks.

Vertex sets throughout the package are plain ``int`` bitmasks: bit ``v`` set
means vertex ``v`` is a member.  Python ints give whole-word union,
intersection and popcount for free, which is what the solvers lean on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "Graph",
    "GraphInputError",
    "Graph6ParseError",
    "ConfigError",
    "ProductIndexMap",
    "bits",
    "mask_of",
    "from_edge_list",
    "closed_neighborhood",
    "is_connected",
    "cartesian_product",
    "find_claw",
    "is_claw_free",
    "parse_graph6",
    "emit_graph6",
    "parse_edge_list",
    "emit_edge_list",
    "read_graph_file",
    "canonical_code",
    "canonical_form",
    "enumerate_connected_graphs",
    "ENUMERATION_CAP",
    "MAX_GRAPH6_N",
]

ENUMERATION_CAP = 7
MAX_ENUMERATION_N = 9
MAX_GRAPH6_N = 62


class GraphInputError(ValueError):
    """Malformed graph input: bad endpoint, self-loop, vertex out of range."""


class Graph6ParseError(GraphInputError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class ConfigError(ValueError):
    """A requested size or cap is outside what the tooling supports."""


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.adj) != self.n:
            raise GraphInputError("adjacency length does not match n")
        full = (1 << self.n) - 1
        for v, m in enumerate(self.adj):
            if m & ~full:
                raise GraphInputError(f"vertex {v} has a neighbor outside [0, {self.n})")
            if m >> v & 1:
                raise GraphInputError(f"self-loop at vertex {v}")
            for u in bits(m):
                if not self.adj[u] >> v & 1:
                    raise GraphInputError(f"asymmetric adjacency between {v} and {u}")

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(bits(self.adj[v]))

    def closed_mask(self, v: int) -> int:
        return self.adj[v] | 1 << v

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def m(self) -> int:
        return sum(m.bit_count() for m in self.adj) // 2

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


def from_edge_list(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    if n < 0:
        raise GraphInputError(f"negative vertex count {n}")
    adj = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphInputError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
        if u == v:
            raise GraphInputError(f"edge ({u}, {v}) is a self-loop")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, tuple(adj))


def _check_vertex(G: Graph, v: int) -> None:
    if not 0 <= v < G.n:
        raise GraphInputError(f"vertex {v} outside [0, {G.n})")


def closed_neighborhood(G: Graph, v: int) -> frozenset[int]:
    _check_vertex(G, v)
    return frozenset(bits(G.closed_mask(v)))


def is_connected(G: Graph) -> bool:
    if G.n == 0:
        raise GraphInputError("the empty graph has no connectivity verdict")
    seen = frontier = 1
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= G.adj[v]
        frontier = nxt & ~seen
        seen |= frontier
    return seen == G.full_mask


@dataclass(frozen=True)
class ProductIndexMap:
    """Flat indexing of ``V(G) x V(H)``; fibers ``G^h`` are contiguous blocks.

    ``flat(g, h) = h * nG + g``, so iterating flat indices visits H-vertices
    in ascending order and, within a fiber, G-vertices in ascending order.
    """

    nG: int
    nH: int

    def flat(self, g: int, h: int) -> int:
        if not (0 <= g < self.nG and 0 <= h < self.nH):
            raise GraphInputError(f"({g}, {h}) outside the product vertex set")
        return h * self.nG + g

    def unflat(self, p: int) -> tuple[int, int]:
        if not 0 <= p < self.nG * self.nH:
            raise GraphInputError(f"product index {p} out of range")
        h, g = divmod(p, self.nG)
        return g, h

    def fiber_mask(self, h: int) -> int:
        return ((1 << self.nG) - 1) << (h * self.nG)

    def lift(self, gmask: int, h: int) -> int:
        """Lift a G-vertex set to fiber ``h``."""
        return gmask << (h * self.nG)

    def project_g(self, pmask: int, h: int) -> int:
        return (pmask >> (h * self.nG)) & ((1 << self.nG) - 1)


def cartesian_product(G: Graph, H: Graph) -> tuple[Graph, ProductIndexMap]:
    if G.n == 0 or H.n == 0:
        raise GraphInputError("cartesian product needs nonempty factors")
    pm = ProductIndexMap(G.n, H.n)
    adj = []
    for h in range(H.n):
        for g in range(G.n):
            m = G.adj[g] << (h * G.n)
            for h2 in bits(H.adj[h]):
                m |= 1 << (h2 * G.n + g)
            adj.append(m)
    return Graph(G.n * H.n, tuple(adj)), pm


def find_claw(G: Graph) -> tuple[int, tuple[int, int, int]] | None:
    """Return ``(center, (a, b, c))`` for an induced K_{1,3}, or None."""
    for c in range(G.n):
        nb = G.adj[c]
        if nb.bit_count() < 3:
            continue
        for a in bits(nb):
            rest_a = nb & ~G.adj[a] & ~((1 << (a + 1)) - 1)
            for b in bits(rest_a):
                rest_b = rest_a & ~G.adj[b] & ~((1 << (b + 1)) - 1)
                if rest_b:
                    return c, (a, b, next(bits(rest_b)))
    return None


def is_claw_free(G: Graph) -> bool:
    return find_claw(G) is None


# graph6 ------------------------------------------------------------------


def emit_graph6(G: Graph) -> str:
    """Encode ``G`` in graph6 (single-byte size header, n <= 62)."""
    if G.n > MAX_GRAPH6_N:
        raise GraphInputError(f"graph6 output limited to n <= {MAX_GRAPH6_N}, got {G.n}")
    bitstream = [G.adj[i] >> j & 1 for j in range(1, G.n) for i in range(j)]
    bitstream += [0] * (-len(bitstream) % 6)
    out = [chr(G.n + 63)]
    for k in range(0, len(bitstream), 6):
        val = 0
        for b in bitstream[k:k + 6]:
            val = val << 1 | b
        out.append(chr(val + 63))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    data = text.strip("\r\n")
    base = 0
    if data.startswith(">>graph6<<"):
        base = 10
        data = data[10:]
    if not data:
        raise Graph6ParseError("empty graph6 string", base)
    for off, ch in enumerate(data):
        if not 63 <= ord(ch) <= 126:
            raise Graph6ParseError(f"invalid graph6 character {ch!r}", base + off)
    if data[0] == "~":
        raise Graph6ParseError(f"multi-byte size header (n > {MAX_GRAPH6_N}) not supported", base)
    n = ord(data[0]) - 63
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[1:]
    if len(body) < need:
        raise Graph6ParseError(f"truncated bit string: need {need} bytes, got {len(body)}",
                               base + len(data))
    if len(body) > need:
        raise Graph6ParseError("trailing bytes after adjacency data", base + 1 + need)
    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = ord(body[k // 6]) - 63
            if byte >> (5 - k % 6) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    if need and (ord(body[-1]) - 63) & ((1 << (need * 6 - nbits)) - 1):
        raise Graph6ParseError("nonzero padding bits", base + len(data) - 1)
    return Graph(n, tuple(adj))


def parse_edge_list(text: str) -> Graph:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 2:
        raise GraphInputError("edge list must start with a line 'n m'")
    try:
        n, m = int(lines[0][0]), int(lines[0][1])
        edges = [(int(a), int(b)) for a, b in lines[1:]]
    except ValueError as exc:
        raise GraphInputError(f"malformed edge list: {exc}") from None
    if len(edges) != m:
        raise GraphInputError(f"header declares {m} edges, found {len(edges)}")
    return from_edge_list(n, edges)


def emit_edge_list(G: Graph) -> str:
    es = G.edges()
    return "\n".join([f"{G.n} {len(es)}"] + [f"{u} {v}" for u, v in es]) + "\n"


def read_graph_file(path) -> list[Graph]:
    """Read ``.g6`` (one graph per line) or ``.el`` (single edge list) files."""
    path = str(path)
    if not path.endswith((".el", ".g6")):
        raise GraphInputError(f"cannot infer graph format from {path!r}; use .g6 or .el")
    with open(path) as fh:
        text = fh.read()
    if path.endswith(".el"):
        return [parse_edge_list(text)]
    return [parse_graph6(ln) for ln in text.splitlines() if ln.strip()]


# canonical forms and enumeration ------------------------------------------


def _refined_colors(G: Graph) -> list[int]:
    colors = [G.degree(v) for v in range(G.n)]
    ncls = len(set(colors))
    while True:
        sigs = [(colors[v], tuple(sorted(colors[u] for u in bits(G.adj[v])))) for v in range(G.n)]
        ranks = {s: r for r, s in enumerate(sorted(set(sigs)))}
        colors = [ranks[s] for s in sigs]
        if len(ranks) == ncls:
            return colors
        ncls = len(ranks)


@lru_cache(maxsize=None)
def _block_perms(sizes: tuple[int, ...]) -> np.ndarray:
    """All orderings of positions that permute only within consecutive blocks."""
    blocks = []
    start = 0
    for s in sizes:
        blocks.append(list(itertools.permutations(range(start, start + s))))
        start += s
    rows = [sum(choice, ()) for choice in itertools.product(*blocks)]
    return np.array(rows, dtype=np.intp).reshape(len(rows), start)


@lru_cache(maxsize=None)
def _triu(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    I, J = np.triu_indices(n, 1)
    weights = np.array([1 << (len(I) - 1 - k) for k in range(len(I))], dtype=np.int64)
    return I, J, weights


def canonical_code(G: Graph) -> tuple[int, tuple[int, ...]]:
    """Isomorphism-invariant code plus the vertex order realizing it.

    Vertices are first split by color refinement; the code is the
    lexicographically minimal upper-triangle adjacency bit string over all
    orderings that list color classes in color order and permute freely
    within each class.  Only isomorphic graphs share a code.
    """
    n = G.n
    if n <= 1:
        return 0, tuple(range(n))
    if n > MAX_ENUMERATION_N:
        raise ConfigError(f"canonical form limited to n <= {MAX_ENUMERATION_N}")
    colors = _refined_colors(G)
    order = sorted(range(n), key=lambda v: (colors[v], v))
    sizes = tuple(len(list(grp)) for _, grp in itertools.groupby(order, key=colors.__getitem__))
    perms = np.asarray(order, dtype=np.intp)[_block_perms(sizes)]
    A = np.zeros((n, n), dtype=np.int64)
    for u, v in G.edges():
        A[u, v] = A[v, u] = 1
    I, J, w = _triu(n)
    codes = A[perms[:, I], perms[:, J]] @ w
    best = int(np.argmin(codes))
    return int(codes[best]), tuple(int(x) for x in perms[best])


def canonical_form(G: Graph) -> Graph:
    _, order = canonical_code(G)
    pos = {v: i for i, v in enumerate(order)}
    return from_edge_list(G.n, [(pos[u], pos[v]) for u, v in G.edges()])


@lru_cache(maxsize=None)
def _connected_classes(n: int) -> tuple[Graph, ...]:
    if n == 1:
        return (Graph(1, (0,)),)
    found: dict[int, Graph] = {}
    for base in _connected_classes(n - 1):
        # every connected graph has a non-cut vertex, so each class on n
        # vertices arises from some class on n-1 by attaching one vertex
        for attach in range(1, 1 << (n - 1)):
            adj = list(base.adj) + [attach]
            for u in bits(attach):
                adj[u] |= 1 << (n - 1)
            cand = Graph(n, tuple(adj))
            code, _ = canonical_code(cand)
            if code not in found:
                found[code] = canonical_form(cand)
    return tuple(found[c] for c in sorted(found))


def enumerate_connected_graphs(n: int, cap: int = ENUMERATION_CAP) -> Iterator[Graph]:
    """Yield one canonical representative per connected graph class on ``n`` vertices."""
    if cap > MAX_ENUMERATION_N:
        raise ConfigError(f"enumeration cap {cap} exceeds the hard limit {MAX_ENUMERATION_N}")
    if not 1 <= n <= cap:
        raise ConfigError(f"n={n} outside the enumeration range [1, {cap}]")
    yield from _connected_classes(n)
