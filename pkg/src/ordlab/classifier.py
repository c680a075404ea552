"""Uniformity classification of hereditary graph properties.

A property is given either as a finite forbidden family (its members are the
graphs with no induced copy of any family graph), as a membership oracle
with a size cap, or as a template.  Verdicts carry the short name of the
result that decided them and enough witness data to re-check it.  Oracle
hypotheses quantify over infinitely many graphs, so oracle certificates
record the bounds up to which they were verified.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import networkx as nx

from .graph import (
    CapExceeded,
    Graph,
    add_isolated,
    canonical_code,
    complement,
    complete,
    components,
    contains_induced,
    disjoint_union,
    flower,
    glue_at_vertex,
    induced_subgraph,
    is_clique_union,
    is_complete_multipartite,
    is_forest,
    is_homogeneous,
    is_two_connected,
    iter_embedding_maps,
    parse_graph,
    path,
    replace_by_twins,
    replicate_over_subgraph,
)
from .lab import TestReport, check_uniformity
from .samplers import CopyPattern, SamplerSpec
from .templates import Template, classify_template
from .verdict import Label, Verdict

P3 = path(3)
CO_P3 = disjoint_union(complete(2), complete(1))


def _twin_free_direction(family) -> str | None:
    def has(g, kind):
        return any(_twins(g, u, v) == kind for u, v in itertools.combinations(range(g.n), 2))

    if not any(has(h, "adjacent") for h in family):
        return "no-adjacent-twins"
    if not any(has(h, "nonadjacent") for h in family):
        return "no-nonadjacent-twins"
    return None


def _twins(g: Graph, u: int, v: int) -> str | None:
    mask = ~((1 << u) | (1 << v))
    if g.rows[u] & mask != g.rows[v] & mask:
        return None
    return "adjacent" if g.has_edge(u, v) else "nonadjacent"


def _dedupe(family) -> list[Graph]:
    seen, out = set(), []
    for h in family:
        code = canonical_code(h)
        if code not in seen:
            seen.add(code)
            out.append(h)
    return out


def _in_family(family, g: Graph) -> bool:
    code = canonical_code(g)
    return any(h.n == g.n and canonical_code(h) == code for h in family)


def _h_free(family, g: Graph) -> bool:
    return not any(h.n <= g.n and contains_induced(g, h) for h in family)


def _block_witness(g: Graph) -> dict:
    return {"sampler": {"kind": "block"}, "graph": g.to_edge_list()}


def classify_forbidden_family(family) -> Verdict:
    family = _dedupe(family)
    has_p3, has_cop3 = _in_family(family, P3), _in_family(family, CO_P3)
    names = [h.to_edge_list() for h in family]

    if not has_p3 and not has_cop3:
        direction = _twin_free_direction(family)
        if direction is not None:
            return Verdict(Label.UNIFORM, "t:free", {"direction": direction, "family": names})

    for comp, fam in ((False, family), (True, [complement(h) for h in family])):
        if fam and all(is_two_connected(h) for h in fam):
            return Verdict(Label.UNIFORM, "t:joins", {"complement": comp, "two_connected": names})

    # every non-homogeneous graph contains P3 or coP3
    if not _h_free(family, P3) and not _h_free(family, CO_P3):
        return Verdict(Label.UNIFORM, "homogeneous",
                       {"reason": "every member of the property is complete or edgeless"})

    if has_p3 or has_cop3:
        # P3-free graphs are clique unions, coP3-free ones complete multipartite
        w = _block_witness(CO_P3 if has_p3 else P3)
        w["mode"] = "cliques" if has_p3 else "parts"
        return Verdict(Label.NON_UNIFORM, "x:unionKn", w)

    return Verdict(Label.UNKNOWN, "none", {"family": names})


# -- membership oracles --------------------------------------------------------


@dataclass(frozen=True)
class MembershipOracle:
    name: str
    predicate: Callable[[Graph], bool]
    cap: int = 16
    max_degree: int | None = None  # declared degree bound, if any
    known_witness: dict | None = field(default=None, compare=False)

    def __call__(self, g: Graph) -> bool:
        if g.n > self.cap:
            raise CapExceeded(f"{self.name}: graph on {g.n} vertices exceeds cap {self.cap}")
        return bool(self.predicate(g))


def to_networkx(g: Graph) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(range(g.n))
    out.add_edges_from(g.edges())
    return out


def _triangle_free(g: Graph) -> bool:
    return not any(g.rows[u] & g.rows[v] for u, v in g.edges())


def _is_star(g: Graph) -> bool:
    # K_{1,n} for n >= 1, center anywhere
    return g.n >= 2 and g.m == g.n - 1 and max(g.degrees()) == g.n - 1


def _stars_and_empty(g: Graph) -> bool:
    return g.m == 0 or _is_star(g)


def _star_plus_isolated(g: Graph) -> bool:
    big = [c for c in components(g) if len(c) > 1]
    if len(big) > 1:
        return False
    return not big or _is_star(induced_subgraph(g, big[0])[0])


def _flower_piece_ok(g: Graph, comp: list[int], z: int) -> bool:
    h, _ = induced_subgraph(g, comp)
    touch = [g.has_edge(v, z) for v in comp]
    if h.n == 1:
        return True
    if h.n == 2:
        return h.m == 1 and sum(touch) == 1
    if h.n == 3 and h.m == 2:
        mid = next(i for i in range(3) if h.degree(i) == 2)
        return touch == [i != mid for i in range(3)]
    return False


def _is_flower_part(g: Graph) -> bool:
    """Induced subgraphs of C4s sharing one vertex."""
    if g.n == 0:
        return True
    if all(len(c) <= 3 and induced_subgraph(g, c)[0].m == len(c) - 1
           and max(induced_subgraph(g, c)[0].degrees(), default=0) <= 2 for c in components(g)):
        return True
    for z in range(g.n):
        rest = [v for v in range(g.n) if v != z]
        sub, labels = induced_subgraph(g, rest)
        if all(_flower_piece_ok(g, [labels[i] for i in c], z) for c in components(sub)):
            return True
    return False


def builtin_oracle(name: str, cap: int = 32) -> MembershipOracle:
    """forests, triangle-free, bipartite, planar, bounded-degree:<d>, flowers,
    stars-and-empty, star-plus-isolated, clique-unions, all."""
    simple = {
        "forests": is_forest,
        "triangle-free": _triangle_free,
        "bipartite": lambda g: nx.is_bipartite(to_networkx(g)),
        "planar": lambda g: nx.check_planarity(to_networkx(g))[0],
        "stars-and-empty": _stars_and_empty,
        "star-plus-isolated": _star_plus_isolated,
        "clique-unions": is_clique_union,
        "all": lambda g: True,
    }
    if name in simple:
        return MembershipOracle(name, simple[name], cap)
    if name == "flowers":
        # one C4 is ordered uniformly; the two petals minus the centre are not
        return MembershipOracle(name, _is_flower_part, cap, known_witness={
            "sampler": {"kind": "flower", "petals": [2]}, "graph": flower(2).to_edge_list(),
            "tuples": [[1, 2, 3, 4, 5, 6]]})
    head, _, rest = name.partition(":")
    if head == "bounded-degree" and rest.isdigit():
        d = int(rest)
        return MembershipOracle(name, lambda g: max(g.degrees(), default=0) <= d, cap, max_degree=d)
    raise ValueError(f"unknown oracle {name!r}")


def forbidden_family_oracle(family, cap: int = 16) -> MembershipOracle:
    family = _dedupe(family)
    return MembershipOracle("forbidden-family", lambda g: _h_free(family, g), cap)


# -- bounded hypothesis checks ---------------------------------------------------


def check_twin_closure(prop: MembershipOracle, g: Graph, v: int, reps: int = 2, pad: int = 0) -> bool:
    """Bounded twin-replacement closure at (G, v): for each start G + p
    isolated vertices (p <= pad) that lies in P, some chain of ``reps``
    successive twin replacements (each step adjacent or non-adjacent)
    stays inside P."""

    def chain(h: Graph, w: int, left: int) -> bool:
        if left == 0:
            return True
        for adjacent in (False, True):
            nxt = replace_by_twins(h, w, 2, adjacent)
            if prop(nxt) and chain(nxt, nxt.n - 1, left - 1):
                return True
        return False

    for p in range(pad + 1):
        start = add_isolated(g, p)
        if prop(start) and not chain(start, v, reps):
            return False
    return True


def glue_graph(g: Graph, h, n: int, copies: int = 2) -> Graph:
    """``copies`` disjoint copies of [G]^n_H, plus n isolated vertices."""
    rep = replicate_over_subgraph(g, h, n)
    out = rep
    for _ in range(copies - 1):
        out = disjoint_union(out, rep)
    return add_isolated(out, n)


def check_glue_closure(prop: MembershipOracle, g: Graph, h, n_max: int, copies: int = 2) -> bool:
    return all(prop(glue_graph(g, h, n, copies)) for n in range(1, n_max + 1))


def _leaves(f: Graph) -> list[int]:
    return [v for v in range(f.n) if f.degree(v) == 1]


def check_leaves_condition(prop: MembershipOracle, f: Graph, reps: int = 3, pad: int = 2) -> dict:
    """First of the two leaf conditions that holds for the forest F up to the
    given bounds (twin counts 1..reps, padding 0..pad)."""
    if not is_forest(f):
        raise ValueError("F must be a forest")
    leaves = _leaves(f)
    for u in leaves:
        if all(prop(add_isolated(replace_by_twins(f, u, r, False), p))
               for r in range(1, reps + 1) for p in range(pad + 1)):
            return {"condition": "i", "u": u, "reps": reps, "pad": pad}
    for u1, u2 in itertools.combinations(leaves, 2):
        if f.neighbors(u1)[0] == f.neighbors(u2)[0]:
            continue
        ok = True
        for r1, r2 in itertools.product(range(1, reps + 1), repeat=2):
            g1 = replace_by_twins(f, u1, r1, False)
            if not prop(replace_by_twins(g1, u2, r2, False)):
                ok = False
                break
        if ok:
            return {"condition": "ii", "u1": u1, "u2": u2, "reps": reps}
    return {"condition": "neither"}


# -- oracle classification ------------------------------------------------------


def atlas(max_n: int) -> list[Graph]:
    """All graphs on 1..max_n vertices (max_n <= 7), up to isomorphism."""
    if max_n > 7:
        raise ValueError("the atlas covers at most 7 vertices")
    out = []
    for h in nx.graph_atlas_g()[1:]:
        if h.number_of_nodes() > max_n:
            break
        out.append(Graph(h.number_of_nodes(), h.edges()))
    return out


def _members(prop: MembershipOracle, max_n: int) -> list[Graph]:
    return [g for g in atlas(max_n) if g.n <= prop.cap and prop(g)]


def _joins_closed(prop, members, max_n) -> bool:
    small = [g for g in members if g.n <= max_n]
    for g1, g2 in itertools.product(small, repeat=2):
        for v1, v2 in itertools.product(range(g1.n), range(g2.n)):
            if not prop(glue_at_vertex(g1, v1, g2, v2)):
                return False
    return True


def _copies_disjoint(h: Graph, g: Graph) -> bool:
    images = {frozenset(m) for m in iter_embedding_maps(h, g, cap=None)}
    return sum(len(s) for s in images) == len(frozenset().union(*images))


def _disjoint_pattern(members) -> Graph | None:
    for h in members:
        if 2 <= h.n <= 3 and all(_copies_disjoint(h, g) for g in members):
            return h
    return None


def classify_oracle(prop: MembershipOracle, catalog_n: int = 5, reps: int = 2, pad: int = 2,
                    joins_n: int = 4) -> Verdict:
    """Check hypotheses in a fixed order on the catalog of members with at
    most ``catalog_n`` vertices."""
    catalog_n = min(catalog_n, prop.cap)
    members = _members(prop, catalog_n)
    bound = {"catalog_n": catalog_n, "reps": reps, "pad": pad, "joins_n": joins_n}
    nonhom = [g for g in members if not is_homogeneous(g)]
    if not nonhom:
        return Verdict(Label.UNIFORM, "homogeneous", {"verified_up_to": bound})
    smallest = nonhom[0]

    if prop.max_degree is not None:
        return Verdict(Label.NON_UNIFORM, "t:bounded", {
            "sampler": {"kind": "spectral", "epsilon": "auto"}, "graph": smallest.to_edge_list(),
            "max_degree": prop.max_degree})

    if _joins_closed(prop, members, joins_n):
        return Verdict(Label.UNIFORM, "t:joins", {"verified_up_to": bound})

    rich = [g for g in members if not is_clique_union(g) and not is_complete_multipartite(g)]
    twin_ok = bool(rich) and all(
        check_twin_closure(prop, g, v, reps, 0)
        for g in members if g.n < catalog_n
        for v in range(g.n))
    if twin_ok:
        return Verdict(Label.UNIFORM, "t:twin", {"verified_up_to": bound,
                                                  "rich_member": rich[0].to_edge_list()})

    if all(is_forest(g) for g in members):
        conds = {}
        for f in members:
            if f.m == 0 or f.n > catalog_n - 1:
                continue
            c = check_leaves_condition(prop, f, reps + 1, pad)
            if c["condition"] == "neither":
                conds = None
                break
            conds[f.to_edge_list()] = c
        if conds:
            return Verdict(Label.UNIFORM, "t:leaves", {"verified_up_to": bound, "conditions": conds})

    h = _disjoint_pattern(members)
    if h is not None:
        host = next((g for g in nonhom if contains_induced(g, h)), None)
        if host is not None:
            return Verdict(Label.NON_UNIFORM, "t:disjoint", {
                "sampler": {"kind": "disjoint_copies", "copy_pattern": CopyPattern.find(h, host).to_dict()},
                "graph": host.to_edge_list(), "verified_up_to": bound})

    if all(is_clique_union(g) for g in members):
        return Verdict(Label.NON_UNIFORM, "x:unionKn", {**_block_witness(CO_P3), "mode": "cliques"})
    if all(is_complete_multipartite(g) for g in members):
        return Verdict(Label.NON_UNIFORM, "x:unionKn", {**_block_witness(P3), "mode": "parts"})

    if prop.known_witness is not None:
        return Verdict(Label.NON_UNIFORM, "x:" + prop.name, dict(prop.known_witness))

    return Verdict(Label.UNKNOWN, "none", {"verified_up_to": bound})


# -- property dispatch ------------------------------------------------------------


@dataclass(frozen=True)
class PropertySpec:
    kind: str  # forbidden_family | membership_oracle | template
    family: tuple = ()
    oracle: MembershipOracle | None = None
    template: Template | None = None

    def __post_init__(self):
        if self.kind == "forbidden_family":
            if len(_dedupe(self.family)) != len(self.family):
                raise ValueError("forbidden family graphs must be pairwise non-isomorphic")
            if self.oracle is not None and self.family and self.oracle.cap < max(h.n for h in self.family):
                raise ValueError("oracle cap below the largest forbidden graph")
        elif self.kind == "membership_oracle":
            if self.oracle is None:
                raise ValueError("membership_oracle needs an oracle")
        elif self.kind == "template":
            if self.template is None:
                raise ValueError("template kind needs a template")
        else:
            raise ValueError(f"unknown property kind {self.kind!r}")


def classify(spec: PropertySpec, **bounds) -> Verdict:
    if spec.kind == "forbidden_family":
        return classify_forbidden_family(list(spec.family))
    if spec.kind == "membership_oracle":
        return classify_oracle(spec.oracle, **bounds)
    return classify_template(spec.template)


def witness_graph(verdict: Verdict) -> Graph:
    return parse_graph(verdict.witness["graph"])


def check_witness(verdict: Verdict, n_samples: int = 100_000, significance: float = 1e-3,
                  seed: int = 0, k_max: int = 4) -> TestReport:
    """Run the uniformity test on a NON_UNIFORM verdict's sampler and graph.
    The witness holds when the returned report does not pass."""
    if verdict.label is not Label.NON_UNIFORM:
        raise ValueError("only NON_UNIFORM verdicts carry a sampler witness")
    w = verdict.witness
    spec = SamplerSpec.from_dict(w["sampler"])
    g = spec.graph() or witness_graph(verdict)
    tuples = [tuple(t) for t in w["tuples"]] if "tuples" in w else None
    return check_uniformity(spec, g, k_max, n_samples, significance, seed, tuples=tuples)


__all__ = [
    "CO_P3", "P3", "MembershipOracle", "PropertySpec", "atlas", "builtin_oracle", "check_glue_closure",
    "check_witness",
    "check_leaves_condition", "check_twin_closure", "classify", "classify_forbidden_family",
    "classify_oracle", "forbidden_family_oracle", "glue_graph", "to_networkx", "witness_graph",
]
