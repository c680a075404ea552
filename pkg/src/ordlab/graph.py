"""Finite simple graphs on dense vertex indices, with the structural
predicates and constructions used throughout the package.

Adjacency is stored as one integer bitmask per vertex, so an edge test is a
single shift-and-mask.  Graphs are immutable once built.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

DEFAULT_CAP = 12


class GraphFormatError(ValueError):
    pass


class CapExceeded(ValueError):
    """Raised when a search would exceed its vertex-count cap."""


class Graph:
    __slots__ = ("n", "rows", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        self.n = n
        self.rows = tuple(rows)
        self._hash = None

    @classmethod
    def from_rows(cls, rows: Sequence[int]) -> "Graph":
        g = cls.__new__(cls)
        g.n = len(rows)
        g.rows = tuple(rows)
        g._hash = None
        return g

    @classmethod
    def from_matrix(cls, a) -> "Graph":
        a = np.asarray(a, dtype=bool)
        n = a.shape[0]
        return cls(n, [(i, j) for i in range(n) for j in range(i + 1, n) if a[i, j]])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        r = self.rows[v]
        return [u for u in range(self.n) if r >> u & 1]

    def degree(self, v: int) -> int:
        return bin(self.rows[v]).count("1")

    def degrees(self) -> list[int]:
        return [bin(r).count("1") for r in self.rows]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if self.rows[u] >> v & 1]

    @property
    def m(self) -> int:
        return sum(self.degrees()) // 2

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int8)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1
        return a

    def __eq__(self, other):
        return isinstance(other, Graph) and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edges()})"

    def to_edge_list(self) -> str:
        lines = [str(self.n)] + [f"{u} {v}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class VertexSet:
    graph: Graph
    members: frozenset

    def __post_init__(self):
        bad = [v for v in self.members if not 0 <= v < self.graph.n]
        if bad:
            raise ValueError(f"vertices {sorted(bad)} out of range for n={self.graph.n}")

    @classmethod
    def of(cls, graph: Graph, members: Iterable[int]) -> "VertexSet":
        return cls(graph, frozenset(members))

    def sorted(self) -> list[int]:
        return sorted(self.members)


@dataclass(frozen=True)
class Embedding:
    """Injective map realizing ``source`` as an induced subgraph of ``target``."""

    source: Graph
    target: Graph
    map: tuple

    def image(self) -> frozenset:
        return frozenset(self.map)

    def is_valid(self) -> bool:
        m = self.map
        if len(set(m)) != len(m):
            return False
        return all(
            self.source.has_edge(a, b) == self.target.has_edge(m[a], m[b])
            for a, b in itertools.combinations(range(self.source.n), 2)
        )


# -- parsing ---------------------------------------------------------------


def parse_graph(text: str, format: str = "edge-list") -> Graph:
    if format in ("edge-list", "el"):
        return _parse_edge_list(text)
    if format == "graph6":
        return _parse_graph6(text)
    raise GraphFormatError(f"unknown graph format {format!r}")


def _parse_edge_list(text: str) -> Graph:
    lines = [ln.split("#", 1)[0].strip() for ln in text.strip().splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphFormatError("empty input")
    try:
        n = int(lines[0])
    except ValueError:
        raise GraphFormatError(f"malformed header {lines[0]!r}") from None
    if n < 0:
        raise GraphFormatError("negative vertex count")
    seen = set()
    for i, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {i}: expected 'u v', got {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {i}: non-integer vertex in {ln!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {i}: vertex index out of range for n={n}")
        if u == v:
            raise GraphFormatError(f"line {i}: self-loop at {u}")
        e = (min(u, v), max(u, v))
        if e in seen:
            warnings.warn(f"duplicate edge {e} ignored", stacklevel=3)
            continue
        seen.add(e)
    return Graph(n, seen)


def _parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise GraphFormatError("empty graph6 string")
    data = [ord(c) - 63 for c in s]
    if any(not 0 <= d < 64 for d in data):
        raise GraphFormatError("graph6 characters must lie in '?'..'~'")
    n = data[0]
    if n == 63:
        raise GraphFormatError("graph6 with n > 62 is not supported")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(data) - 1 != need:
        raise GraphFormatError(f"graph6 body has {len(data) - 1} bytes, expected {need}")
    bits = []
    for d in data[1:]:
        bits.extend((d >> (5 - k)) & 1 for k in range(6))
    edges = []
    pos = 0
    for j in range(1, n):
        for i in range(j):
            if bits[pos]:
                edges.append((i, j))
            pos += 1
    return Graph(n, edges)


# -- constructors ----------------------------------------------------------


def complete(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def empty(n: int) -> Graph:
    return Graph(n)


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star(leaves: int) -> Graph:
    """K_{1,leaves} with center 0."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def bull() -> Graph:
    # triangle 0-1-2 with pendant 3 on 1 and pendant 4 on 2
    return Graph(5, [(0, 1), (1, 2), (0, 2), (1, 3), (2, 4)])


def double_broom(path_len: int, left: int, right: int) -> Graph:
    """Path 0..path_len-1; ``left`` leaves on vertex 0, then ``right`` on the last."""
    edges = [(i, i + 1) for i in range(path_len - 1)]
    nxt = path_len
    for _ in range(left):
        edges.append((0, nxt))
        nxt += 1
    for _ in range(right):
        edges.append((path_len - 1, nxt))
        nxt += 1
    return Graph(nxt, edges)


def flower(petals: int) -> Graph:
    """[C4]^petals glued at vertex 0.

    Petal i uses vertices a=1+3i, c=2+3i, b=3+3i with cycle 0-a-c-b-0.
    """
    edges = []
    for i in range(petals):
        a, c, b = 1 + 3 * i, 2 + 3 * i, 3 + 3 * i
        edges += [(0, a), (a, c), (c, b), (b, 0)]
    return Graph(1 + 3 * petals, edges)


NAMED = {
    "K1": lambda: complete(1),
    "K2": lambda: complete(2),
    "K3": lambda: complete(3),
    "K4": lambda: complete(4),
    "P3": lambda: path(3),
    "P4": lambda: path(4),
    "P5": lambda: path(5),
    "C4": lambda: cycle(4),
    "C5": lambda: cycle(5),
    "claw": lambda: star(3),
    "bull": bull,
    "K2+K1": lambda: disjoint_union(complete(2), complete(1)),
    "coP3": lambda: disjoint_union(complete(2), complete(1)),
}


def named_graph(name: str) -> Graph:
    """Resolve a short graph name: K<n>, E<n> (edgeless), P<n>, C<n>, S<n> (star),
    flower:<k>, broom:<n>:<left>:<right>, or one of NAMED."""
    if name in NAMED:
        return NAMED[name]()
    head, _, rest = name.partition(":")
    if head == "flower":
        return flower(int(rest))
    if head == "broom":
        n, left, right = (int(x) for x in rest.split(":"))
        return double_broom(n, left, right)
    kind, num = name[0], name[1:]
    if num.isdigit():
        k = int(num)
        makers = {"K": complete, "E": empty, "P": path, "C": cycle, "S": star}
        if kind in makers:
            return makers[kind](k)
    raise ValueError(f"unknown graph name {name!r}")


# -- operations ------------------------------------------------------------


def induced_subgraph(g: Graph, s) -> tuple[Graph, list[int]]:
    """Return G[S] relabeled 0..|S|-1 in ascending original order, plus the
    list mapping new index -> original vertex."""
    members = sorted(s.members if isinstance(s, VertexSet) else set(s))
    for v in members:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range for n={g.n}")
    pos = {v: i for i, v in enumerate(members)}
    rows = []
    for v in members:
        r = 0
        for u in members:
            if g.rows[v] >> u & 1:
                r |= 1 << pos[u]
        rows.append(r)
    return Graph.from_rows(rows), members


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph.from_rows([(full ^ r) & ~(1 << v) for v, r in enumerate(g.rows)])


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    shift = g1.n
    return Graph.from_rows(list(g1.rows) + [r << shift for r in g2.rows])


def glue_at_vertex(g1: Graph, v1: int, g2: Graph, v2: int) -> Graph:
    """Identify v1 in G1 with v2 in G2.  G1 keeps its labels; G2's other
    vertices follow in ascending order."""
    if not (0 <= v1 < g1.n and 0 <= v2 < g2.n):
        raise ValueError("glue vertex out of range")
    relabel = {}
    nxt = g1.n
    for u in range(g2.n):
        if u == v2:
            relabel[u] = v1
        else:
            relabel[u] = nxt
            nxt += 1
    edges = g1.edges() + [(relabel[a], relabel[b]) for a, b in g2.edges()]
    return Graph(nxt, edges)


def replicate_over_subgraph(g: Graph, h, n: int, cap: int | None = None) -> Graph:
    """[G]^n_H: n copies of G sharing the induced copy of H.

    Copy 0 keeps G's labels, so n=1 returns G itself; the private vertices
    of copy c >= 1 are appended in ascending original order.
    """
    hs = set(h.members if isinstance(h, VertexSet) else h)
    if n < 1:
        raise ValueError("need n >= 1")
    if not hs or len(hs) >= g.n:
        raise ValueError("H must be a proper nonempty vertex subset")
    if any(not 0 <= v < g.n for v in hs):
        raise ValueError("H out of range")
    private = [v for v in range(g.n) if v not in hs]
    total = n * len(private) + len(hs)
    if cap is not None and total > cap:
        raise CapExceeded(f"[G]^{n}_H has {total} vertices > cap {cap}")
    edges = set(g.edges())
    nxt = g.n
    for _ in range(1, n):
        lab = {v: v for v in hs}
        for v in private:
            lab[v] = nxt
            nxt += 1
        for a, b in g.edges():
            x, y = lab[a], lab[b]
            edges.add((min(x, y), max(x, y)))
    return Graph(total, edges)


def replace_by_twins(g: Graph, v: int, count: int, adjacent: bool) -> Graph:
    """Replace v by ``count`` twins (v keeps its label, the rest are appended)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    nbrs = g.neighbors(v)
    edges = g.edges()
    new = list(range(g.n, g.n + count - 1))
    twins = [v] + new
    for t in new:
        edges += [(t, u) for u in nbrs]
    if adjacent:
        edges += list(itertools.combinations(twins, 2))
    return Graph(g.n + count - 1, edges)


def add_isolated(g: Graph, k: int) -> Graph:
    return Graph.from_rows(list(g.rows) + [0] * k)


# -- embeddings ------------------------------------------------------------


def _search_order(h: Graph) -> list[int]:
    # connected-first order so adjacency constraints prune early
    order, seen = [], set()
    for start in sorted(range(h.n), key=lambda v: -h.degree(v)):
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in sorted(h.neighbors(v), key=lambda x: -h.degree(x)):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
    return order


def iter_embedding_maps(h: Graph, g: Graph, cap: int | None = DEFAULT_CAP) -> Iterator[tuple]:
    """Yield every induced embedding of H into G as a tuple map[h_vertex]."""
    if cap is not None and g.n > cap:
        raise CapExceeded(f"target has {g.n} vertices > cap {cap}")
    if h.n > g.n:
        return
    if h.n == 0:
        yield ()
        return
    order = _search_order(h)
    full = (1 << g.n) - 1
    grows = g.rows
    # for position i: list of (earlier position j, adjacent?)
    constraints = []
    for i, hv in enumerate(order):
        constraints.append([(j, h.has_edge(hv, order[j])) for j in range(i)])
    img = [0] * h.n

    def rec(i: int, used: int):
        if i == h.n:
            out = [0] * h.n
            for pos, hv in enumerate(order):
                out[hv] = img[pos]
            yield tuple(out)
            return
        cand = full & ~used
        for j, adj in constraints[i]:
            gv = img[j]
            cand &= grows[gv] if adj else ~grows[gv]
        while cand:
            low = cand & -cand
            gv = low.bit_length() - 1
            cand ^= low
            img[i] = gv
            yield from rec(i + 1, used | low)

    yield from rec(0, 0)


def enumerate_embeddings(h: Graph, g: Graph, cap: int | None = DEFAULT_CAP) -> list[Embedding]:
    return [Embedding(h, g, m) for m in iter_embedding_maps(h, g, cap)]


def contains_induced(g: Graph, h: Graph, cap: int | None = None) -> bool:
    return next(iter_embedding_maps(h, g, cap), None) is not None


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.n != g2.n or g1.m != g2.m or sorted(g1.degrees()) != sorted(g2.degrees()):
        return False
    return contains_induced(g2, g1)


def canonical_code(g: Graph) -> tuple:
    """Brute-force canonical form (lexicographically least adjacency over all
    relabelings).  Only for small graphs."""
    best = None
    for perm in itertools.permutations(range(g.n)):
        code = tuple(int(g.has_edge(perm[i], perm[j])) for i in range(g.n) for j in range(i + 1, g.n))
        if best is None or code < best:
            best = code
    return (g.n, best)


# -- structure -------------------------------------------------------------


def twin_status(g: Graph, u: int, v: int) -> str:
    if u == v:
        raise ValueError("twin_status needs distinct vertices")
    mask = ~((1 << u) | (1 << v))
    if g.rows[u] & mask != g.rows[v] & mask:
        return "not_twins"
    return "adjacent_twins" if g.has_edge(u, v) else "nonadjacent_twins"


def has_twins(g: Graph, kind: str) -> bool:
    return any(twin_status(g, u, v) == kind for u, v in itertools.combinations(range(g.n), 2))


def components(g: Graph) -> list[list[int]]:
    seen = 0
    out = []
    for s in range(g.n):
        if seen >> s & 1:
            continue
        comp, frontier = 0, 1 << s
        while frontier:
            comp |= frontier
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= g.rows[low.bit_length() - 1]
                f ^= low
            frontier = nxt & ~comp
        seen |= comp
        out.append([v for v in range(g.n) if comp >> v & 1])
    return out


def is_clique_union(g: Graph) -> bool:
    for comp in components(g):
        k = len(comp)
        if any(g.degree(v) != k - 1 for v in comp):
            return False
    return True


def is_complete_multipartite(g: Graph) -> bool:
    return is_clique_union(complement(g))


def is_homogeneous(g: Graph) -> bool:
    m = g.m
    return m == 0 or m == g.n * (g.n - 1) // 2


def is_forest(g: Graph) -> bool:
    return g.m == g.n - len(components(g))


def _articulation_points(g: Graph) -> set[int]:
    disc = [-1] * g.n
    low = [0] * g.n
    cut = set()
    timer = 0

    def dfs(v, parent):
        nonlocal timer
        disc[v] = low[v] = timer
        timer += 1
        children = 0
        for u in g.neighbors(v):
            if disc[u] == -1:
                children += 1
                dfs(u, v)
                low[v] = min(low[v], low[u])
                if parent != -1 and low[u] >= disc[v]:
                    cut.add(v)
            elif u != parent:
                low[v] = min(low[v], disc[u])
        if parent == -1 and children > 1:
            cut.add(v)

    for v in range(g.n):
        if disc[v] == -1:
            dfs(v, -1)
    return cut


def is_two_connected(g: Graph) -> bool:
    return g.n >= 3 and len(components(g)) == 1 and not _articulation_points(g)


def leaf_support(g: Graph) -> frozenset:
    """Vertices adjacent to at least one leaf."""
    out = set()
    for v in range(g.n):
        if g.degree(v) == 1:
            out.update(g.neighbors(v))
    return frozenset(out)


@dataclass(frozen=True)
class StructureReport:
    homogeneous: bool
    clique_union: bool
    complete_multipartite: bool
    two_connected: bool
    forest: bool
    max_degree: int
    leaf_support: frozenset


def structure_report(g: Graph) -> StructureReport:
    return StructureReport(
        homogeneous=is_homogeneous(g),
        clique_union=is_clique_union(g),
        complete_multipartite=is_complete_multipartite(g),
        two_connected=is_two_connected(g),
        forest=is_forest(g),
        max_degree=max(g.degrees(), default=0),
        leaf_support=leaf_support(g),
    )
