import itertools

import pytest

from ordlab.classifier import (
    CO_P3,
    P3,
    MembershipOracle,
    PropertySpec,
    atlas,
    builtin_oracle,
    check_glue_closure,
    check_leaves_condition,
    check_twin_closure,
    check_witness,
    classify,
    classify_forbidden_family,
    classify_oracle,
    forbidden_family_oracle,
    glue_graph,
    witness_graph,
)
from ordlab.graph import (
    CapExceeded,
    Graph,
    complement,
    complete,
    cycle,
    disjoint_union,
    empty,
    has_twins,
    is_forest,
    is_isomorphic,
    is_two_connected,
    path,
    star,
)
from ordlab.templates import Template
from ordlab.verdict import Label

REGRESSION = [
    ("K3", [complete(3)], Label.UNIFORM, "t:free"),
    ("K13", [star(3)], Label.UNIFORM, "t:free"),
    ("C3,C4", [cycle(3), cycle(4)], Label.UNIFORM, "t:joins"),
    ("C4..C8", [cycle(k) for k in range(4, 9)], Label.UNIFORM, "t:free"),
    ("P3", [P3], Label.NON_UNIFORM, "x:unionKn"),
    ("coP3", [CO_P3], Label.NON_UNIFORM, "x:unionKn"),
]


@pytest.mark.parametrize("name,family,label,cert", REGRESSION, ids=[r[0] for r in REGRESSION])
def test_regression_set(name, family, label, cert):
    v = classify_forbidden_family(family)
    assert (v.label, v.certificate) == (label, cert)


def test_regression_directions_and_witnesses():
    assert classify_forbidden_family([complete(3)]).witness["direction"] == "no-nonadjacent-twins"
    assert classify_forbidden_family([star(3)]).witness["direction"] == "no-adjacent-twins"
    assert classify_forbidden_family([cycle(k) for k in range(4, 9)]).witness["direction"] == "no-adjacent-twins"
    v = classify_forbidden_family([P3])
    assert v.witness["sampler"] == {"kind": "block"} and is_isomorphic(witness_graph(v), CO_P3)
    v = classify_forbidden_family([CO_P3])
    assert v.witness["mode"] == "parts" and is_isomorphic(witness_graph(v), P3)


def test_homogeneous_and_unknown():
    v = classify_forbidden_family([P3, CO_P3])
    assert v.label is Label.UNIFORM and v.certificate == "homogeneous"
    # excluding K2 leaves only edgeless graphs
    assert classify_forbidden_family([P3, complete(2)]).certificate == "homogeneous"
    assert classify_forbidden_family([empty(2), complete(2)]).certificate == "homogeneous"
    # twins of both kinds, neither side 2-connected; no implemented result applies
    v = classify_forbidden_family([empty(3), complete(3)])
    assert v.label is Label.UNKNOWN and v.certificate == "none"


def small_families():
    graphs = [g for g in atlas(4) if g.n >= 2]
    for g in graphs:
        yield [g]
    for g, h in itertools.combinations(graphs, 2):
        if not is_isomorphic(g, h):
            yield [g, h]


def test_complement_equivariance():
    for fam in small_families():
        a = classify_forbidden_family(fam)
        b = classify_forbidden_family([complement(h) for h in fam])
        assert a.label == b.label, ([h.to_edge_list() for h in fam], a, b)


def test_uniform_hypotheses_recheck():
    """Whatever structural predicate a UNIFORM certificate cites holds on the family."""
    for fam in small_families():
        v = classify_forbidden_family(fam)
        if v.certificate == "t:free":
            kind = "adjacent_twins" if v.witness["direction"] == "no-adjacent-twins" else "nonadjacent_twins"
            assert not any(has_twins(h, kind) for h in fam)
            assert not any(is_isomorphic(h, P3) or is_isomorphic(h, CO_P3) for h in fam)
        elif v.certificate == "t:joins":
            hs = [complement(h) for h in fam] if v.witness["complement"] else fam
            assert all(h.n >= 3 and is_two_connected(h) for h in hs)


def test_non_uniform_witnesses_reject():
    verdicts = [classify_forbidden_family([P3]), classify_forbidden_family([CO_P3])]
    verdicts += [classify_oracle(builtin_oracle(n)) for n in
                 ("stars-and-empty", "clique-unions", "flowers", "bounded-degree:2")]
    from ordlab.templates import classify_template
    verdicts.append(classify_template(Template(empty(2), (True, True))))
    verdicts.append(classify_oracle(MembershipOracle("matchings", lambda g: max(g.degrees(), default=0) <= 1)))
    certs = set()
    for i, v in enumerate(verdicts):
        assert v.label is Label.NON_UNIFORM
        rep = check_witness(v, n_samples=100_000, seed=i)
        assert not rep.passed, v.certificate
        certs.add(v.certificate)
    assert {"x:unionKn", "x:flowers", "t:bounded", "x:UK", "t:disjoint"} <= certs


def test_check_witness_needs_non_uniform():
    with pytest.raises(ValueError):
        check_witness(classify_forbidden_family([complete(3)]))


@pytest.mark.parametrize("name,label,cert", [
    ("forests", Label.UNIFORM, "t:joins"),
    ("triangle-free", Label.UNIFORM, "t:joins"),
    ("bipartite", Label.UNIFORM, "t:joins"),
    ("planar", Label.UNIFORM, "t:joins"),
    ("all", Label.UNIFORM, "t:joins"),
    ("star-plus-isolated", Label.UNIFORM, "t:leaves"),
    ("stars-and-empty", Label.NON_UNIFORM, "x:unionKn"),
    ("clique-unions", Label.NON_UNIFORM, "x:unionKn"),
    ("flowers", Label.NON_UNIFORM, "x:flowers"),
    ("bounded-degree:2", Label.NON_UNIFORM, "t:bounded"),
    ("bounded-degree:0", Label.UNIFORM, "homogeneous"),
])
def test_builtin_oracles(name, label, cert):
    v = classify_oracle(builtin_oracle(name))
    assert (v.label, v.certificate) == (label, cert)
    if label is Label.UNIFORM and cert != "homogeneous":
        assert "verified_up_to" in v.witness


def test_builtin_oracle_predicates():
    assert builtin_oracle("planar")(complete(4)) and not builtin_oracle("planar")(complete(5))
    assert builtin_oracle("bipartite")(cycle(6)) and not builtin_oracle("bipartite")(cycle(5))
    fl = builtin_oracle("flowers")
    from ordlab.graph import flower
    assert fl(flower(3)) and fl(path(3)) and not fl(cycle(5)) and not fl(complete(3))
    assert builtin_oracle("star-plus-isolated")(disjoint_union(star(2), empty(2)))
    assert not builtin_oracle("stars-and-empty")(disjoint_union(star(2), empty(1)))
    with pytest.raises(ValueError):
        builtin_oracle("perfect")


def test_oracle_cap():
    o = builtin_oracle("forests", cap=4)
    with pytest.raises(CapExceeded):
        o(path(5))


def test_forbidden_family_oracle():
    o = forbidden_family_oracle([complete(3)])
    assert o(cycle(4)) and not o(complete(4))


# -- bounded hypothesis checks -----------------------------------------------------


def test_twin_closure_examples():
    everything = builtin_oracle("all")
    assert all(check_twin_closure(everything, g, 0) for g in atlas(3))
    assert check_twin_closure(builtin_oracle("triangle-free"), complete(2), 0)
    small = MembershipOracle("at-most-3", lambda g: g.n <= 3)
    assert not check_twin_closure(small, complete(3), 0, reps=1)


def test_glue_closure_examples():
    forests = builtin_oracle("forests")
    assert check_glue_closure(forests, path(3), [0], 4)
    g = glue_graph(path(3), [0], 3)
    assert g.n == 2 * 7 + 3 and is_forest(g)
    flowers = builtin_oracle("flowers")
    assert check_glue_closure(flowers, cycle(4), [0], 3, copies=1)
    assert not check_glue_closure(flowers, cycle(4), [0], 3, copies=2)
    assert check_glue_closure(builtin_oracle("all"), cycle(4), [0, 1], 3)


def test_leaves_condition_examples():
    r = check_leaves_condition(builtin_oracle("star-plus-isolated"), complete(2))
    assert r["condition"] == "i" and r["u"] in (0, 1)
    assert check_leaves_condition(builtin_oracle("stars-and-empty"), path(3))["condition"] == "neither"
    assert check_leaves_condition(builtin_oracle("forests"), path(4))["condition"] == "i"
    with pytest.raises(ValueError):
        check_leaves_condition(builtin_oracle("all"), cycle(3))


# -- property dispatch ---------------------------------------------------------------


def test_property_spec_validation_and_dispatch():
    with pytest.raises(ValueError):
        PropertySpec("forbidden_family", family=(complete(3), complete(3)))
    with pytest.raises(ValueError):
        PropertySpec("forbidden_family", family=(complete(5),), oracle=builtin_oracle("all", cap=4))
    with pytest.raises(ValueError):
        PropertySpec("membership_oracle")
    with pytest.raises(ValueError):
        PropertySpec("template")
    with pytest.raises(ValueError):
        PropertySpec("graphon")
    assert classify(PropertySpec("forbidden_family", family=(complete(3),))).certificate == "t:free"
    assert classify(PropertySpec("membership_oracle", oracle=builtin_oracle("flowers"))).certificate == "x:flowers"
    t = Template(Graph(2), (True, True))
    assert classify(PropertySpec("template", template=t)).certificate == "x:UK"


def test_atlas_bounds():
    assert len(atlas(4)) == 1 + 2 + 4 + 11
    with pytest.raises(ValueError):
        atlas(8)
