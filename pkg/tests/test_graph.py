import itertools

import networkx as nx
import pytest
from networkx.algorithms import isomorphism

from ordlab.graph import (
    CapExceeded,
    Embedding,
    Graph,
    GraphFormatError,
    VertexSet,
    add_isolated,
    bull,
    canonical_code,
    complement,
    complete,
    components,
    contains_induced,
    cycle,
    disjoint_union,
    double_broom,
    empty,
    enumerate_embeddings,
    flower,
    glue_at_vertex,
    has_twins,
    induced_subgraph,
    is_clique_union,
    is_complete_multipartite,
    is_forest,
    is_homogeneous,
    is_isomorphic,
    is_two_connected,
    iter_embedding_maps,
    leaf_support,
    named_graph,
    parse_graph,
    path,
    replace_by_twins,
    replicate_over_subgraph,
    star,
    structure_report,
    twin_status,
)


def small_graphs(max_n=5):
    for h in nx.graph_atlas_g()[1:]:
        if h.number_of_nodes() > max_n:
            break
        yield Graph(h.number_of_nodes(), h.edges()), h


def brute_embeddings(h: Graph, g: Graph):
    out = set()
    for m in itertools.permutations(range(g.n), h.n):
        if all(h.has_edge(a, b) == g.has_edge(m[a], m[b]) for a, b in itertools.combinations(range(h.n), 2)):
            out.add(m)
    return out


# -- parsing ---------------------------------------------------------------------


def test_edge_list_roundtrip():
    g = bull()
    assert parse_graph(g.to_edge_list()) == g


def test_edge_list_comments_and_blank_lines():
    g = parse_graph("# a path\n3\n\n0 1  # first\n1 2\n")
    assert g == path(3)


def test_duplicate_edge_warns_once_and_dedupes():
    with pytest.warns(UserWarning, match="duplicate"):
        g = parse_graph("3\n0 1\n1 0\n")
    assert g.m == 1


@pytest.mark.parametrize("text", ["3\n0 0\n", "3\n0 3\n", "x\n", "", "2\n0\n", "-1\n", "2\n0 a\n"])
def test_edge_list_errors(text):
    with pytest.raises(GraphFormatError):
        parse_graph(text)


def test_graph6_matches_networkx_on_all_small_graphs():
    for g, h in small_graphs(5):
        code = nx.to_graph6_bytes(h, header=False).decode().strip()
        assert parse_graph(code, "graph6") == g
        assert parse_graph(">>graph6<<" + code, "graph6") == g


@pytest.mark.parametrize("text", ["", "~??", "A", "B!"])
def test_graph6_errors(text):
    with pytest.raises(GraphFormatError):
        parse_graph(text, "graph6")


def test_unknown_format():
    with pytest.raises(ValueError):
        parse_graph("1\n", "dot")


# -- constructors and basic API ------------------------------------------------------


def test_constructor_validation():
    with pytest.raises(ValueError):
        Graph(2, [(0, 0)])
    with pytest.raises(ValueError):
        Graph(2, [(0, 2)])
    with pytest.raises(ValueError):
        Graph(-1)


def test_named_graphs():
    assert named_graph("K4").m == 6
    assert named_graph("E3").m == 0
    assert named_graph("C5") == cycle(5)
    assert named_graph("S3") == star(3)
    assert named_graph("flower:2") == flower(2)
    assert named_graph("broom:3:2:1") == double_broom(3, 2, 1)
    assert is_isomorphic(named_graph("coP3"), complement(path(3)))
    with pytest.raises(ValueError):
        named_graph("Q7")


def test_flower_and_broom_shapes():
    f = flower(2)
    assert f.n == 7 and f.m == 8 and f.degree(0) == 4
    for i in range(2):
        a, c, b = 1 + 3 * i, 2 + 3 * i, 3 + 3 * i
        assert f.has_edge(0, a) and f.has_edge(a, c) and f.has_edge(c, b) and f.has_edge(b, 0)
    b = double_broom(3, 10, 10)
    assert b.n == 23 and is_forest(b)
    assert b.degree(0) == 11 and b.degree(2) == 11 and b.degree(1) == 2


def test_adjacency_matrix_and_from_matrix():
    g = bull()
    a = g.adjacency_matrix()
    assert (a == a.T).all() and a.sum() == 2 * g.m
    assert Graph.from_matrix(a) == g


def test_vertex_set_and_embedding_validation():
    with pytest.raises(ValueError):
        VertexSet.of(path(3), [0, 3])
    e = Embedding(path(2), path(3), (0, 1))
    assert e.is_valid() and e.image() == frozenset({0, 1})
    assert not Embedding(path(2), path(3), (0, 2)).is_valid()


def test_equality_and_hash():
    assert Graph(3, [(0, 1)]) == Graph(3, [(1, 0)])
    assert len({Graph(3, [(0, 1)]), Graph(3, [(1, 0)])}) == 1


# -- embeddings -------------------------------------------------------------------


def test_embeddings_match_brute_force():
    hosts = [bull(), cycle(5), path(4), complement(cycle(5)), star(3)]
    patterns = [path(3), complement(path(3)), complete(2), empty(2), path(2), cycle(4), complete(3)]
    for g in hosts:
        for h in patterns:
            assert set(iter_embedding_maps(h, g)) == brute_embeddings(h, g)


def test_embeddings_match_networkx_counts():
    for g, gx in small_graphs(5):
        for h in (path(3), complete(3), empty(3)):
            hx = nx.Graph(h.edges())
            hx.add_nodes_from(range(h.n))
            gm = isomorphism.GraphMatcher(gx, hx)
            expected = sum(1 for _ in gm.subgraph_isomorphisms_iter())
            assert len(enumerate_embeddings(h, g)) == expected


def test_embedding_cap():
    with pytest.raises(CapExceeded):
        list(iter_embedding_maps(path(2), path(13)))
    assert len(list(iter_embedding_maps(path(2), path(13), cap=None))) == 24


def test_p4_in_c5_has_ten_maps():
    assert len(enumerate_embeddings(path(4), cycle(5))) == 10


def test_isomorphism_and_canonical_code():
    for g, _ in small_graphs(4):
        for perm in itertools.islice(itertools.permutations(range(g.n)), 6):
            h = Graph(g.n, [(perm[a], perm[b]) for a, b in g.edges()])
            assert is_isomorphic(g, h)
            assert canonical_code(g) == canonical_code(h)
    assert not is_isomorphic(path(4), star(3))


# -- operations -------------------------------------------------------------------


def test_induced_subgraph_relabels_in_order():
    h, members = induced_subgraph(bull(), [4, 2, 0])
    assert members == [0, 2, 4]
    assert h == Graph(3, [(0, 1), (1, 2)])


def test_complement_involution():
    for g, _ in small_graphs(4):
        assert complement(complement(g)) == g


def test_disjoint_union_and_glue():
    u = disjoint_union(path(2), path(3))
    assert u.n == 5 and len(components(u)) == 2
    g = glue_at_vertex(cycle(4), 0, cycle(4), 0)
    assert is_isomorphic(g, flower(2))


def test_replicate_invariants():
    g = path(3)
    for n in range(1, 5):
        r = replicate_over_subgraph(g, [0], n)
        assert r.n == 1 + 2 * n
        assert is_forest(r)
        # copies of G pinned at the shared vertex: one per replica
        pinned = [m for m in iter_embedding_maps(g, r, cap=None) if m[0] == 0]
        assert len(pinned) == n
    assert replicate_over_subgraph(g, [0], 1) == g
    with pytest.raises(ValueError):
        replicate_over_subgraph(g, [0, 1, 2], 2)
    with pytest.raises(CapExceeded):
        replicate_over_subgraph(g, [0], 10, cap=5)


def test_replicate_c4_over_vertex_is_flower():
    assert is_isomorphic(replicate_over_subgraph(cycle(4), [0], 3), flower(3))


def test_replace_by_twins():
    g = replace_by_twins(path(2), 0, 3, adjacent=False)
    assert is_isomorphic(g, star(3))
    g = replace_by_twins(path(2), 0, 2, adjacent=True)
    assert is_isomorphic(g, complete(3))
    assert twin_status(g, 0, 2) == "adjacent_twins"


def test_add_isolated():
    g = add_isolated(path(2), 2)
    assert g.n == 4 and g.m == 1


# -- structure ----------------------------------------------------------------------


def test_structure_predicates_against_networkx():
    for g, gx in small_graphs(5):
        assert is_forest(g) == nx.is_forest(gx)
        if g.n >= 3:
            assert is_two_connected(g) == (nx.is_connected(gx) and nx.is_biconnected(gx))
        assert len(components(g)) == nx.number_connected_components(gx)


def test_twins():
    assert has_twins(complete(3), "adjacent_twins")
    assert not has_twins(complete(3), "nonadjacent_twins")
    assert not has_twins(star(3), "adjacent_twins")
    assert has_twins(cycle(4), "nonadjacent_twins")
    for k in range(5, 9):
        assert not has_twins(cycle(k), "adjacent_twins")
        assert not has_twins(cycle(k), "nonadjacent_twins")


def test_clique_union_and_multipartite():
    k2k1 = disjoint_union(complete(2), complete(1))
    assert is_clique_union(k2k1) and not is_complete_multipartite(k2k1)
    assert is_complete_multipartite(path(3)) and not is_clique_union(path(3))
    assert is_homogeneous(complete(4)) and is_homogeneous(empty(3)) and not is_homogeneous(path(3))


def test_structure_report():
    r = structure_report(double_broom(3, 2, 2))
    assert r.forest and not r.two_connected and r.max_degree == 3
    assert r.leaf_support == frozenset({0, 2})
    assert leaf_support(path(2)) == frozenset({0, 1})
