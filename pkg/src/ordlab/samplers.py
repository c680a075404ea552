"""Consistent random vertex orderings.

Every sampler works by drawing one latent real per vertex and ordering the
vertices by it, ties broken by vertex index.  The batch entry point is
``prepare(spec, graph).latents(size, rng)``, which returns a (size, n)
array; the ``sample_*`` functions draw a single ordering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import bernoulli
from .graph import (
    Graph,
    complement,
    components,
    disjoint_union,
    double_broom,
    flower,
    induced_subgraph,
    is_clique_union,
    is_complete_multipartite,
    is_homogeneous,
    iter_embedding_maps,
    parse_graph,
)

KINDS = ("uniform", "block", "spectral", "mod1_edge", "disjoint_copies", "double_broom", "flower")


class SamplerDomainError(ValueError):
    """The graph is outside the sampler's domain or parameters are invalid."""


def mod1(v):
    r = np.mod(v, 1.0)
    # np.mod(-tiny, 1.0) rounds to 1.0
    return np.where(r >= 1.0, 0.0, r)


# -- value types -----------------------------------------------------------


@dataclass(frozen=True)
class VertexOrdering:
    graph: Graph
    rank: tuple  # rank[v] = position of v, 0 = smallest
    latent: np.ndarray | None = field(default=None, compare=False)

    @classmethod
    def from_latents(cls, graph: Graph, x) -> "VertexOrdering":
        x = np.asarray(x, dtype=float)
        order = np.argsort(x, kind="stable")
        rank = np.empty(len(x), dtype=np.int64)
        rank[order] = np.arange(len(x))
        return cls(graph, tuple(int(r) for r in rank), x)

    def order(self) -> list[int]:
        out = [0] * len(self.rank)
        for v, r in enumerate(self.rank):
            out[r] = v
        return out

    def precedes(self, u: int, v: int) -> bool:
        return self.rank[u] < self.rank[v]


@dataclass(frozen=True)
class CopyPattern:
    """A pattern graph H and its induced copies in the host graph, each copy
    given as the images of H's vertices 0..|H|-1."""

    pattern: Graph
    copies: tuple = ()

    def to_dict(self):
        return {"pattern": self.pattern.to_edge_list(), "copies": [list(c) for c in self.copies]}

    @classmethod
    def from_dict(cls, d):
        return cls(parse_graph(d["pattern"]), tuple(tuple(c) for c in d.get("copies", [])))

    @classmethod
    def find(cls, pattern: Graph, host: Graph) -> "CopyPattern":
        """All induced copies of ``pattern`` in ``host``, one map per vertex set."""
        seen = {}
        for m in iter_embedding_maps(pattern, host, cap=None):
            seen.setdefault(frozenset(m), m)
        return cls(pattern, tuple(sorted(seen.values())))


@dataclass(frozen=True)
class SamplerSpec:
    kind: str
    alpha: float | str | None = None
    epsilon: float | str | None = None
    copy_pattern: CopyPattern | None = None
    path_len: int | None = None
    left_leaves: int = 0
    right_leaves: int = 0
    petals: tuple | int | None = None
    drop_center: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SamplerDomainError(f"unknown sampler kind {self.kind!r}")
        if isinstance(self.petals, int):
            object.__setattr__(self, "petals", (self.petals,))
        elif self.petals is not None:
            object.__setattr__(self, "petals", tuple(int(p) for p in self.petals))
        if self.kind == "double_broom" and (self.path_len is None or self.path_len < 3):
            raise SamplerDomainError("double_broom needs path_len >= 3")
        if self.kind == "flower" and (not self.petals or min(self.petals) < 1):
            raise SamplerDomainError("flower needs petals >= 1")
        if self.kind == "disjoint_copies" and self.copy_pattern is None:
            raise SamplerDomainError("disjoint_copies needs a copy_pattern")

    def graph(self) -> Graph | None:
        """The fixed graph for kinds that construct their own (broom, flower)."""
        if self.kind == "double_broom":
            return double_broom(self.path_len, self.left_leaves, self.right_leaves)
        if self.kind == "flower":
            return flower_union_graph(self.petals, self.drop_center)
        return None

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "seed": self.seed}
        if self.alpha is not None:
            d["alpha"] = self.alpha
        if self.epsilon is not None:
            d["epsilon"] = self.epsilon
        if self.copy_pattern is not None:
            d["copy_pattern"] = self.copy_pattern.to_dict()
        if self.kind == "double_broom":
            d.update(path_len=self.path_len, left_leaves=self.left_leaves, right_leaves=self.right_leaves)
        if self.kind == "flower":
            d.update(petals=list(self.petals), drop_center=self.drop_center)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SamplerSpec":
        d = dict(d)
        if "copy_pattern" in d:
            d["copy_pattern"] = CopyPattern.from_dict(d["copy_pattern"])
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SamplerSpec":
        return cls.from_dict(json.loads(text))


# -- helpers ---------------------------------------------------------------


def default_epsilon(g: Graph) -> float:
    d = max(g.degrees(), default=0)
    return 1.0 / (2 * d) if d > 0 else 0.5


def _resolve_float(value, default):
    if value is None or value == "auto":
        return default()
    return float(value)


def _edge_alpha(g: Graph) -> float:
    """Auto target for the edge-conditioned construction: maximize the exact
    ordering offset it induces on g."""
    n = g.n
    degs = g.degrees()
    if n < 3:
        return 0.0
    if len(set(degs)) > 1:
        return bernoulli.auto_alpha(n - 1)
    if n < 4:
        return 0.0
    grid = np.arange(0.0, 1.0, 1e-4)
    vals = np.abs(bernoulli.regular_offset(n, grid))
    return float(grid[int(np.argmax(vals))])


def _homogeneous_alpha(k: int) -> float:
    return bernoulli.auto_alpha(k)


def _broom_alpha(n: int) -> float:
    zeros = bernoulli.bernoulli_zeros(n)
    return 0.5 if n % 2 else zeros[0]


def _edge_condition(x: np.ndarray, verts, local_edges, alpha: float, rng) -> None:
    """In place: pick one edge per row and refit one coordinate so that the
    signed sum over ``verts`` (edge endpoints -1, others +1) is alpha mod 1."""
    size = x.shape[0]
    m = len(verts)
    edges = np.asarray(local_edges, dtype=np.int64)
    choice = rng.integers(len(edges), size=size)
    ex, ey = edges[choice, 0], edges[choice, 1]
    rows = np.arange(size)
    signs = np.ones((size, m))
    signs[rows, ex] = -1.0
    signs[rows, ey] = -1.0
    # fixed coordinate: local 0 unless it is an endpoint, then the lowest non-endpoint
    v0 = np.zeros(size, dtype=np.int64)
    if m > 2:
        hit = (ex == 0) | (ey == 0)
        other = np.where(ex == 0, ey, ex)
        v0 = np.where(hit, np.where(other == 1, 2, 1), 0)
    sub = x[:, verts]
    s0 = signs[rows, v0]
    rest = (signs * sub).sum(axis=1) - s0 * sub[rows, v0]
    sub[rows, v0] = mod1(s0 * (alpha - rest))
    x[:, verts] = sub


def flower_union_graph(petals, drop_center=False) -> Graph:
    g = Graph(0)
    for k in petals:
        g = disjoint_union(g, flower(k))
    if drop_center:
        centers, off = set(), 0
        for k in petals:
            centers.add(off)
            off += 1 + 3 * k
        g, _ = induced_subgraph(g, [v for v in range(g.n) if v not in centers])
    return g


def embed_spectral(g: Graph, epsilon: float | None = None) -> np.ndarray:
    """Symmetric B with B @ B = I + epsilon*A; column x is the point of vertex x,
    so non-adjacent points sit at distance sqrt(2) and adjacent ones at
    sqrt(2 - 2*epsilon)."""
    eps = default_epsilon(g) if epsilon is None else float(epsilon)
    d = max(g.degrees(), default=0)
    if d > 0 and not 0.0 < eps < 1.0 / d:
        raise SamplerDomainError(f"epsilon={eps} outside (0, 1/{d})")
    a = g.adjacency_matrix().astype(float)
    try:
        w, q = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise SamplerDomainError(f"eigendecomposition failed: {exc}") from exc
    lam = 1.0 + eps * w
    if np.any(lam <= 0):
        raise SamplerDomainError("I + epsilon*A is not positive definite")
    b = (q * np.sqrt(lam)) @ q.T
    return (b + b.T) / 2


# -- prepared samplers -----------------------------------------------------


class Sampler:
    """A SamplerSpec bound to a graph, with parameters resolved."""

    def __init__(self, spec: SamplerSpec, graph: Graph):
        self.spec = spec
        self.graph = graph
        self.n = graph.n
        self.params: dict = {}
        getattr(self, "_init_" + spec.kind)()

    def latents(self, size: int, rng: np.random.Generator) -> np.ndarray:
        return getattr(self, "_draw_" + self.spec.kind)(size, rng)

    def draw(self, rng: np.random.Generator) -> VertexOrdering:
        return VertexOrdering.from_latents(self.graph, self.latents(1, rng)[0])

    def orderings(self, size: int, rng: np.random.Generator) -> np.ndarray:
        """(size, n) array; row r lists the vertices from smallest to largest."""
        return np.argsort(self.latents(size, rng), axis=1, kind="stable")

    # uniform
    def _init_uniform(self):
        pass

    def _draw_uniform(self, size, rng):
        return rng.random((size, self.n))

    # block
    def _init_block(self):
        g = self.graph
        if is_clique_union(g):
            blocks, mode = components(g), "cliques"
        elif is_complete_multipartite(g):
            blocks, mode = components(complement(g)), "parts"
        else:
            raise SamplerDomainError("block sampler needs a clique union or complete multipartite graph")
        self.block_of = np.empty(self.n, dtype=np.int64)
        for b, members in enumerate(blocks):
            self.block_of[members] = b
        self.nblocks = len(blocks)
        self.params.update(mode=mode, blocks=blocks)

    def _draw_block(self, size, rng):
        block_rank = np.argsort(rng.random((size, self.nblocks)), axis=1)
        return (block_rank[:, self.block_of] + rng.random((size, self.n))) / self.nblocks

    # spectral
    def _init_spectral(self):
        eps = _resolve_float(self.spec.epsilon, lambda: default_epsilon(self.graph))
        self.points = embed_spectral(self.graph, eps)
        self.params["epsilon"] = eps

    def _draw_spectral(self, size, rng):
        z = rng.standard_normal((size, self.n))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        return z @ self.points

    # mod1_edge
    def _init_mod1_edge(self):
        g = self.graph
        if g.n < 2 or g.m == 0:
            raise SamplerDomainError("mod1_edge needs a graph with at least one edge")
        self.edge_list = g.edges()
        self.params["alpha"] = mod1(_resolve_float(self.spec.alpha, lambda: _edge_alpha(g))).item()

    def _draw_mod1_edge(self, size, rng):
        x = rng.random((size, self.n))
        _edge_condition(x, list(range(self.n)), self.edge_list, self.params["alpha"], rng)
        return x

    # disjoint_copies
    def _init_disjoint_copies(self):
        cp = self.spec.copy_pattern
        h = cp.pattern
        if h.n < 2:
            raise SamplerDomainError("pattern must have at least 2 vertices")
        given = [frozenset(c) for c in cp.copies]
        for c in cp.copies:
            if len(c) != h.n or any(not 0 <= v < self.n for v in c):
                raise SamplerDomainError(f"copy {c} malformed")
            if any(h.has_edge(a, b) != self.graph.has_edge(c[a], c[b])
                   for a in range(h.n) for b in range(a + 1, h.n)):
                raise SamplerDomainError(f"copy {c} is not an induced copy of the pattern")
        if sum(len(s) for s in given) != len(frozenset().union(*given)):
            raise SamplerDomainError("copies are not vertex-disjoint")
        actual = {frozenset(m) for m in iter_embedding_maps(h, self.graph, cap=None)}
        if actual != set(given):
            raise SamplerDomainError("copies do not exhaust the induced copies of the pattern")
        self.homogeneous = is_homogeneous(h)
        if self.homogeneous:
            alpha = _resolve_float(self.spec.alpha, lambda: _homogeneous_alpha(h.n))
        else:
            alpha = _resolve_float(self.spec.alpha, lambda: _edge_alpha(h))
            self.pattern_edges = h.edges()
        self.copies = [list(c) for c in cp.copies]
        self.params["alpha"] = mod1(alpha).item()

    def _draw_disjoint_copies(self, size, rng):
        x = rng.random((size, self.n))
        alpha = self.params["alpha"]
        for c in self.copies:
            if self.homogeneous:
                x[:, c[0]] = mod1(alpha - x[:, c[1:]].sum(axis=1))
            else:
                _edge_condition(x, c, self.pattern_edges, alpha, rng)
        return x

    # double_broom
    def _init_double_broom(self):
        spec = self.spec
        if self.graph != spec.graph():
            raise SamplerDomainError("graph does not match the double broom spec")
        n = spec.path_len
        alpha = mod1(_resolve_float(spec.alpha, lambda: _broom_alpha(n))).item()
        if abs(bernoulli.bernoulli_poly(n, alpha)) > 1e-12:
            raise SamplerDomainError(f"alpha={alpha} is not a zero of B_{n}")
        self.params["alpha"] = alpha

    def _draw_double_broom(self, size, rng):
        n = self.spec.path_len
        x = rng.random((size, self.n))
        x[:, n - 1] = mod1(self.params["alpha"] - x[:, :n - 1].sum(axis=1))
        return x

    # flower
    def _init_flower(self):
        if self.graph != self.spec.graph():
            raise SamplerDomainError("graph does not match the flower spec")
        self.params["alpha"] = mod1(_resolve_float(self.spec.alpha, lambda: bernoulli.auto_alpha(4))).item()

    def _draw_flower(self, size, rng):
        alpha = self.params["alpha"]
        cols = []
        for k in self.spec.petals:
            full = rng.random((size, 1 + 3 * k))
            for i in range(k):
                a, c, b = 1 + 3 * i, 2 + 3 * i, 3 + 3 * i
                full[:, c] = mod1(alpha - full[:, 0] - full[:, a] - full[:, b])
            cols.append(full[:, 1:] if self.spec.drop_center else full)
        return np.concatenate(cols, axis=1)


def prepare(spec: SamplerSpec, graph: Graph | None = None) -> Sampler:
    if graph is None:
        graph = spec.graph()
        if graph is None:
            raise SamplerDomainError(f"{spec.kind} sampler needs a graph")
    return Sampler(spec, graph)


# -- single-draw API -------------------------------------------------------


def sample_uniform(g: Graph, rng) -> VertexOrdering:
    return prepare(SamplerSpec("uniform"), g).draw(rng)


def sample_block(g: Graph, rng) -> VertexOrdering:
    return prepare(SamplerSpec("block"), g).draw(rng)


def sample_spectral(g: Graph, epsilon, rng) -> VertexOrdering:
    return prepare(SamplerSpec("spectral", epsilon=epsilon), g).draw(rng)


def sample_mod1_edge(g: Graph, alpha, rng) -> VertexOrdering:
    return prepare(SamplerSpec("mod1_edge", alpha=alpha), g).draw(rng)


def sample_disjoint_copies(g: Graph, copies: CopyPattern, alpha, rng) -> VertexOrdering:
    return prepare(SamplerSpec("disjoint_copies", alpha=alpha, copy_pattern=copies), g).draw(rng)


def sample_double_broom(path_len: int, left_leaves: int, right_leaves: int, alpha, rng) -> VertexOrdering:
    spec = SamplerSpec("double_broom", alpha=alpha, path_len=path_len,
                       left_leaves=left_leaves, right_leaves=right_leaves)
    return prepare(spec).draw(rng)


def sample_flower(petals: int, alpha, rng) -> VertexOrdering:
    return prepare(SamplerSpec("flower", alpha=alpha, petals=petals)).draw(rng)
