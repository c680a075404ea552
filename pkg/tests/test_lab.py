import itertools
import json
import math

import numpy as np
import pytest

from ordlab.graph import Graph, bull, complete, cycle, disjoint_union, path
from ordlab.lab import (
    MIN_MULTIPLICITY,
    BlowUpStatistics,
    EmpiricalF,
    TestReport,
    check_consistency,
    check_cross_consistency,
    check_inverse_and_ffi,
    check_uniformity,
    estimate_blowup_statistics,
    estimate_distribution,
    isomorphic_tuple_pairs,
    pattern_index,
    summarize_blowup,
    truncation_ladder,
)
from ordlab.samplers import SamplerSpec
from ordlab.templates import BlowUpSpec, Template

SIG = 1e-3


def test_pattern_index_is_lexicographic_rank():
    for k in range(1, 6):
        for i, sigma in enumerate(itertools.permutations(range(k))):
            assert pattern_index(sigma) == i


def test_distribution_basics():
    d = estimate_distribution(SamplerSpec("uniform"), path(4), (3, 1, 0), 60_000, seed=1)
    assert d.probabilities.sum() == pytest.approx(1.0, abs=1e-12)
    assert len(d.patterns()) == 6 and d.patterns()[1] == (0, 2, 1)
    assert np.allclose(d.probabilities, 1 / 6, atol=0.01)
    data = json.loads(json.dumps(d.to_dict()))
    assert data["tuple"] == [3, 1, 0] and data["sample_count"] == 60_000


def test_block_distribution_k2_plus_k1():
    d = estimate_distribution(SamplerSpec("block"), disjoint_union(complete(2), complete(1)), (0, 1, 2), 200_000, seed=2)
    # patterns: (0,1,2) (0,2,1) (1,0,2) (1,2,0) (2,0,1) (2,1,0)
    assert d.counts[1] == 0 and d.counts[3] == 0
    assert np.allclose(d.probabilities[[0, 2, 4, 5]], 0.25, atol=0.005)


def test_tuple_validation():
    with pytest.raises(ValueError):
        estimate_distribution(SamplerSpec("uniform"), path(3), (0, 0), 10, seed=0)
    with pytest.raises(ValueError):
        estimate_distribution(SamplerSpec("uniform"), path(3), (0, 3), 10, seed=0)
    with pytest.raises(ValueError):
        estimate_distribution(SamplerSpec("uniform"), Graph(9), tuple(range(9)), 10, seed=0)


def test_isomorphic_pairs_c4():
    pairs = isomorphic_tuple_pairs(cycle(4), 4)
    # k=2: edges (4 sets x 2 maps) and diagonals (2 x 2), minus two identities
    k2 = [p for p in pairs if len(p[0]) == 2]
    assert len(k2) == 8 + 4 - 2
    # k=4: 8 automorphisms minus the identity
    assert len([p for p in pairs if len(p[0]) == 4]) == 7
    for r, s in pairs:
        h = cycle(4)
        assert all(h.has_edge(r[a], r[b]) == h.has_edge(s[a], s[b]) for a, b in itertools.combinations(range(len(r)), 2))


def test_isomorphic_pairs_subsampling_is_capped():
    pairs = isomorphic_tuple_pairs(complete(6), 4, max_tests=50)
    assert len(pairs) == 50


def test_uniform_sampler_consistency_passes():
    reports = check_consistency(SamplerSpec("uniform"), bull(), 3, 50_000, SIG, seed=3)
    fam = reports[-1]
    assert fam.passed and fam.method == "bonferroni"
    assert fam.details["tests"] == len(reports) - 1
    assert all(0 <= r.p_value <= 1 for r in reports)


@pytest.mark.parametrize("g", [cycle(5), bull()], ids=["C5", "bull"])
def test_spectral_consistency_passes(g):
    assert check_consistency(SamplerSpec("spectral"), g, 3, 100_000, SIG, seed=4)[-1].passed


def test_cross_check_separates_two_consistent_models():
    reports = check_consistency(SamplerSpec("mod1_edge", alpha=0.0), path(3), 3, 200_000, SIG, seed=5)
    assert reports[-1].passed  # it is consistent
    cross = check_cross_consistency(SamplerSpec("mod1_edge", alpha=0.0), path(3), SamplerSpec("uniform"), path(3),
                                    path(3), 200_000, SIG, seed=5)
    assert not cross[-1].passed


def test_cross_consistency_same_model_passes():
    cross = check_cross_consistency(SamplerSpec("spectral"), cycle(5), SamplerSpec("spectral"), cycle(5),
                                    path(3), 50_000, SIG, seed=6)
    assert cross[-1].passed and len(cross) == 11
    with pytest.raises(ValueError):
        check_cross_consistency(SamplerSpec("uniform"), path(3), SamplerSpec("uniform"), path(3), complete(3),
                                1000, SIG, seed=6)


def test_uniformity_examples():
    assert not check_uniformity(SamplerSpec("spectral"), path(3), 3, 100_000, SIG, seed=7).passed
    assert not check_uniformity(SamplerSpec("mod1_edge"), path(3), 3, 100_000, SIG, seed=7).passed
    rep = check_uniformity(SamplerSpec("uniform"), bull(), 4, 50_000, SIG, seed=7)
    assert rep.passed and len(rep.details["reports"]) == 10 + 10 + 5


def test_report_to_dict_handles_infinity():
    r = TestReport("x", float("inf"), 2, 0.0, False)
    d = json.loads(json.dumps(r.to_dict()))
    assert d["statistic"] == "inf" and d["p_value"] == 0.0


# -- empirical F and blow-ups ---------------------------------------------------


def test_empirical_f_and_inverse():
    f = EmpiricalF(np.array([0.2, 0.2, 0.6, 0.9]))
    assert f(0.1) == 0 and f(0.2) == 0.5 and f(0.95) == 1.0
    assert f.inverse_at(0.0) == 0.2
    assert f.inverse_at(0.5) == 0.6  # sup{s: F(s) <= 1/2}
    assert f.inverse_at(1.0) == 1.0


def test_inverse_of_inverse():
    grid = 1000
    f = EmpiricalF(np.random.default_rng(0).random(grid))
    back = f.inverse(grid).inverse(grid)
    assert f.sup_distance(back, grid) <= 2 / grid


def test_identity_f_functional():
    grid = 2000
    f = EmpiricalF((np.arange(grid) + 0.5) / grid)
    rep = check_inverse_and_ffi(f, f)
    assert rep.passed and rep.details["uniform_consistent"]
    assert rep.details["functional"] == pytest.approx(2 / 3, abs=1e-3)


def test_point_mass_functional():
    # one draw of the block sampler on K+K: block u entirely below block v
    f, f_rev = EmpiricalF(np.ones(50)), EmpiricalF(np.zeros(50))
    rep = check_inverse_and_ffi(f, f_rev)
    assert rep.details["functional"] == pytest.approx(1.0)
    assert rep.details["sup_distance"] == 0.0
    assert rep.passed and not rep.details["uniform_consistent"]


def three_vertex_templates():
    return [Template(Graph(3, [(0, 1)]), (True, False, True)),
            Template(Graph(3, [(0, 1), (1, 2)]), (False, False, True)),
            Template(Graph(3), (True, True, True))]


@pytest.mark.parametrize("t", three_vertex_templates(), ids=["K2+K1", "P3", "E3"])
def test_uniform_sampler_blowup(t):
    stats = estimate_blowup_statistics(SamplerSpec("uniform"), BlowUpSpec.uniform(t, 200), 0, 2, 500, seed=8)
    assert stats.U.shape == (500, 200) and stats.V_uv.shape == (500, 200)
    rep = summarize_blowup(stats)
    assert rep.details["ks_V_p"] > SIG and rep.details["ks_U_p"] > SIG
    assert abs(rep.details["functional_mean"] - 2 / 3) <= 0.02
    assert rep.passed


def test_block_sampler_k_plus_k():
    t = Template(Graph(2), (True, True))
    stats = estimate_blowup_statistics(SamplerSpec("block"), BlowUpSpec.uniform(t, 50), 0, 1, 4000, seed=9)
    rep = summarize_blowup(stats)
    assert rep.details["V_two_point_fraction"] == 1.0
    n = stats.draws
    assert abs(rep.details["V_mean"] - 0.5) <= 4 * 0.5 / math.sqrt(n)
    assert rep.details["functional_mean"] > 0.9
    assert rep.details["max_sup_distance"] == 0.0


def test_blowup_statistics_validation():
    t = Template(Graph(2), (True, True))
    with pytest.raises(ValueError):
        estimate_blowup_statistics(SamplerSpec("uniform"), BlowUpSpec.uniform(t, MIN_MULTIPLICITY - 1), 0, 1, 10, 0)
    with pytest.raises(ValueError):
        estimate_blowup_statistics(SamplerSpec("uniform"), BlowUpSpec.uniform(t, 30), 0, 0, 10, 0)


def test_blowup_statistics_accessors():
    s = BlowUpStatistics(np.full((2, 3), 0.5), np.array([[0.0, 0.5, 1.0]] * 2), np.array([[0.5] * 3] * 2),
                         (3, 3), 0, 1, 0)
    assert s.draws == 2 and s.F(0)(0.5) == pytest.approx(2 / 3)
    assert len(s.pooled_F().samples) == 6


def test_truncation_ladder():
    t = Template(Graph(2, [(0, 1)]), (False, True))
    rows = truncation_ladder(SamplerSpec("uniform"), t, 0, 1, 100, seed=10, levels=(20, 40))
    assert [r["multiplicity"] for r in rows] == [20, 40]
    assert rows[-1]["drift"] == 0.0
