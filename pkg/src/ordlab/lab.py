"""Monte Carlo estimation of induced ordering distributions, consistency and
uniformity tests, and rank statistics on finite blow-ups."""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, canonical_code, induced_subgraph, iter_embedding_maps
from .kernels import below_counts, pattern_counts
from .rng import chunked, derive_rng, derive_seed
from .samplers import Sampler, SamplerSpec, prepare
from .stats import bonferroni, gof_test, ks_uniform, two_sample_test
from .templates import BlowUpSpec, blow_up

K_CAP = 8
SUBSET_CAP = 12
MAX_TESTS = 2000


def _finite(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


@dataclass
class TestReport:
    __test__ = False  # not a pytest class

    name: str
    statistic: float
    dof: int
    p_value: float | None
    passed: bool
    significance: float | None = None
    sample_sizes: tuple = ()
    seeds: dict = field(default_factory=dict)
    method: str = ""
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "statistic": _finite(self.statistic),
            "dof": self.dof,
            "p_value": _finite(self.p_value),
            "passed": bool(self.passed),
            "significance": self.significance,
            "sample_sizes": list(self.sample_sizes),
            "seeds": self.seeds,
            "method": self.method,
            "details": self.details,
        }


@dataclass
class OrderingDistribution:
    """Counts over the k! relative orders of ``tuple``.

    Entry i is the i-th permutation sigma of range(k) in lexicographic
    order, meaning tuple[sigma[0]] < tuple[sigma[1]] < ...
    """

    tuple: tuple
    counts: np.ndarray
    sample_count: int

    @property
    def probabilities(self) -> np.ndarray:
        return self.counts / max(self.sample_count, 1)

    def patterns(self) -> list[tuple]:
        return list(itertools.permutations(range(len(self.tuple))))

    def probability(self, order) -> float:
        """Empirical probability that the vertices occur in ``order``
        (a permutation of the tuple's vertices, smallest first)."""
        pos = {v: i for i, v in enumerate(self.tuple)}
        sigma = tuple(pos[v] for v in order)
        return float(self.probabilities[pattern_index(sigma)])

    def to_dict(self) -> dict:
        return {"tuple": list(self.tuple), "sample_count": self.sample_count,
                "probabilities": [float(p) for p in self.probabilities]}


def pattern_index(sigma) -> int:
    """Lexicographic rank of a permutation of range(k)."""
    k = len(sigma)
    idx = 0
    for r in range(k):
        smaller = sum(1 for s in sigma[r + 1:] if s < sigma[r])
        idx += smaller * math.factorial(k - 1 - r)
    return idx


def _check_tuple(g: Graph, tup) -> tuple:
    tup = tuple(int(v) for v in tup)
    if not 1 <= len(tup) <= K_CAP:
        raise ValueError(f"tuple length must be 1..{K_CAP}")
    if len(set(tup)) != len(tup) or any(not 0 <= v < g.n for v in tup):
        raise ValueError(f"bad tuple {tup} for a graph on {g.n} vertices")
    return tup


def tuple_counts(sampler: Sampler, tuples, n_samples: int, seed: int, names=()) -> list[np.ndarray]:
    """Pattern counts for several tuples from one shared batch of draws."""
    tuples = [_check_tuple(sampler.graph, t) for t in tuples]

    def work(size, rng):
        x = sampler.latents(size, rng)
        return [pattern_counts(x, t) for t in tuples]

    parts = chunked(int(n_samples), seed, ("counts", sampler.spec.kind) + tuple(names), work)
    return [np.sum([p[i] for p in parts], axis=0).astype(np.int64) for i in range(len(tuples))]


def estimate_distribution(spec: SamplerSpec, g: Graph | None, tup, n_samples: int, seed: int) -> OrderingDistribution:
    sampler = prepare(spec, g)
    tup = _check_tuple(sampler.graph, tup)
    counts = tuple_counts(sampler, [tup], n_samples, seed)[0]
    return OrderingDistribution(tup, counts, int(n_samples))


# -- consistency -------------------------------------------------------------


def _subset_classes(g: Graph, k: int, seed: int, cap: int, max_tests: int) -> dict:
    if g.n <= cap:
        subsets = itertools.combinations(range(g.n), k)
    else:
        rng = derive_rng(seed, "subsets", k)
        picks = {tuple(sorted(rng.choice(g.n, size=k, replace=False).tolist())) for _ in range(4 * max_tests)}
        subsets = sorted(picks)
    classes = defaultdict(list)
    for s in subsets:
        h, _ = induced_subgraph(g, s)
        classes[canonical_code(h)].append(tuple(s))
    return classes


def isomorphic_tuple_pairs(g: Graph, k_max: int, seed: int = 0, cap: int = SUBSET_CAP,
                           max_tests: int = MAX_TESTS) -> list[tuple]:
    """(R, phi(R)) pairs: R is a fixed representative of each isomorphism
    class of induced k-vertex subgraphs, phi ranges over every isomorphism
    onto every member of the class (non-trivial automorphisms of R
    included)."""
    pairs = []
    for k in range(2, min(k_max, g.n) + 1):
        for _, members in sorted(_subset_classes(g, k, seed, cap, max_tests).items()):
            rep = members[0]
            h_rep, _ = induced_subgraph(g, rep)
            for s in members:
                h_s, _ = induced_subgraph(g, s)
                for m in iter_embedding_maps(h_rep, h_s, cap=None):
                    image = tuple(s[i] for i in m)
                    if image != rep:
                        pairs.append((rep, image))
    if len(pairs) > max_tests:
        rng = derive_rng(seed, "pairs")
        keep = np.sort(rng.choice(len(pairs), size=max_tests, replace=False))
        pairs = [pairs[i] for i in keep]
    return pairs


def _family(name, reports, significance, extra=None) -> TestReport:
    pmin, ok = bonferroni([r.p_value for r in reports], significance)
    worst = min(reports, key=lambda r: r.p_value).name if reports else None
    details = {"tests": len(reports), "failed": sum(not r.passed for r in reports),
               "worst": worst, "bonferroni_p": min(1.0, pmin * len(reports)) if reports else 1.0}
    details.update(extra or {})
    return TestReport(name, float(len(reports)), 0, min(1.0, pmin * max(len(reports), 1)), ok,
                      significance, method="bonferroni", details=details)


def _compare(name, ca, cb, n_a, n_b, test_seed, significance, ntests, seeds, extra=None) -> TestReport:
    res = two_sample_test(ca, cb, seed=test_seed)
    return TestReport(name, res.statistic, res.dof, res.p_value, res.p_value * ntests >= significance,
                      significance, (n_a, n_b), seeds, res.method, extra or {})


def check_consistency(spec: SamplerSpec, g: Graph | None, k_max: int, n_samples: int,
                      significance: float = 1e-3, seed: int = 0, cap: int = SUBSET_CAP,
                      max_tests: int = MAX_TESTS) -> list[TestReport]:
    """One two-sample test per (R, phi(R)) pair, each side from an independent
    batch; the last report is the Bonferroni family verdict."""
    sampler = prepare(spec, g)
    pairs = isomorphic_tuple_pairs(sampler.graph, k_max, seed, cap, max_tests)
    seeds = {"a": derive_seed(seed, "consistency", "a"), "b": derive_seed(seed, "consistency", "b")}
    reps = sorted({r for r, _ in pairs})
    images = sorted({s for _, s in pairs})
    ca = dict(zip(reps, tuple_counts(sampler, reps, n_samples, seeds["a"], ("a",))))
    cb = dict(zip(images, tuple_counts(sampler, images, n_samples, seeds["b"], ("b",))))
    reports = []
    for i, (r, s) in enumerate(pairs):
        reports.append(_compare(f"{list(r)}~{list(s)}", ca[r], cb[s], n_samples, n_samples,
                                derive_seed(seed, "perm", i), significance, len(pairs), seeds,
                                {"tuple": list(r), "image": list(s)}))
    reports.append(_family(f"consistency[{spec.kind}]", reports, significance,
                           {"k_max": k_max, "n": sampler.graph.n}))
    return reports


def check_cross_consistency(spec_a: SamplerSpec, g_a: Graph | None, spec_b: SamplerSpec, g_b: Graph | None,
                            pattern: Graph, n_samples: int, significance: float = 1e-3,
                            seed: int = 0, max_tests: int = MAX_TESTS) -> list[TestReport]:
    """Compare the induced distributions on copies of ``pattern`` between two
    models (a single consistent model must give the same law on both)."""
    sa, sb = prepare(spec_a, g_a), prepare(spec_b, g_b)
    maps_a = list(iter_embedding_maps(pattern, sa.graph, cap=None))
    maps_b = list(iter_embedding_maps(pattern, sb.graph, cap=None))
    if not maps_a or not maps_b:
        raise ValueError("pattern does not occur in both graphs")
    ref = tuple(maps_a[0])
    targets = [tuple(m) for m in maps_b][:max_tests]
    seeds = {"a": derive_seed(seed, "cross", "a"), "b": derive_seed(seed, "cross", "b")}
    c_ref = tuple_counts(sa, [ref], n_samples, seeds["a"], ("cross-a",))[0]
    c_b = tuple_counts(sb, targets, n_samples, seeds["b"], ("cross-b",))
    reports = [
        _compare(f"A{list(ref)}~B{list(t)}", c_ref, c, n_samples, n_samples, derive_seed(seed, "perm", i),
                 significance, len(targets), seeds, {"tuple_a": list(ref), "tuple_b": list(t)})
        for i, (t, c) in enumerate(zip(targets, c_b))
    ]
    reports.append(_family(f"cross[{spec_a.kind}|{spec_b.kind}]", reports, significance,
                           {"pattern": pattern.to_edge_list()}))
    return reports


def check_uniformity(spec: SamplerSpec, g: Graph | None, k_max: int, n_samples: int,
                     significance: float = 1e-3, seed: int = 0, tuples=None,
                     max_tests: int = MAX_TESTS) -> TestReport:
    """Goodness of fit of each tuple distribution against 1/k!.  By default
    every k-subset for 2 <= k <= k_max; the family passes when no test
    rejects after Bonferroni."""
    sampler = prepare(spec, g)
    if tuples is None:
        tuples = [s for k in range(2, min(k_max, sampler.graph.n) + 1)
                  for s in itertools.combinations(range(sampler.graph.n), k)]
        if len(tuples) > max_tests:
            rng = derive_rng(seed, "uniformity-subsample")
            tuples = [tuples[i] for i in np.sort(rng.choice(len(tuples), max_tests, replace=False))]
    tuples = [tuple(t) for t in tuples]
    counts = tuple_counts(sampler, tuples, n_samples, seed, ("uniformity",))
    reports = []
    for i, (t, c) in enumerate(zip(tuples, counts)):
        res = gof_test(c, np.full(len(c), 1.0 / len(c)), seed=derive_seed(seed, "gof", i))
        reports.append(TestReport(str(list(t)), res.statistic, res.dof, res.p_value,
                                  res.p_value * len(tuples) >= significance, significance,
                                  (n_samples,), {"seed": seed}, res.method,
                                  {"tuple": list(t), "max_abs_dev": float(np.abs(c / n_samples - 1 / len(c)).max())}))
    fam = _family(f"uniformity[{spec.kind}]", reports, significance, {"k_max": k_max})
    fam.details["reports"] = [r.to_dict() for r in reports]
    fam.sample_sizes = (n_samples,)
    fam.seeds = {"seed": seed}
    return fam


# -- blow-up statistics ------------------------------------------------------

MIN_MULTIPLICITY = 20


@dataclass
class EmpiricalF:
    """Empirical distribution function of a sample of values in [0, 1]."""

    samples: np.ndarray  # sorted

    def __post_init__(self):
        self.samples = np.sort(np.asarray(self.samples, dtype=float))

    def __call__(self, x):
        return np.searchsorted(self.samples, x, side="right") / len(self.samples)

    def inverse_at(self, x):
        """Right-continuous inverse sup{s : F(s) <= x}."""
        m = len(self.samples)
        c = np.floor(np.asarray(x, dtype=float) * m + 1e-12).astype(np.int64)
        out = np.where(c >= m, 1.0, self.samples[np.minimum(c, m - 1)])
        return out

    def inverse(self, grid: int = 1000) -> "EmpiricalF":
        """The inverse as an EmpiricalF: its values at grid midpoints are a
        sample from the inverse distribution."""
        return EmpiricalF(self.inverse_at((np.arange(grid) + 0.5) / grid))

    def second_moment(self) -> float:
        return float(np.mean(self.samples ** 2))

    def sup_distance(self, other: "EmpiricalF", grid: int = 1000) -> float:
        xs = (np.arange(grid) + 0.5) / grid
        return float(np.max(np.abs(self(xs) - other(xs))))


@dataclass
class BlowUpStatistics:
    """Per draw: U[d, i] is the rank fraction of v_i within its block,
    V_uv[d, i] the fraction of block u below v_i, V_vu[d, k] the fraction
    of block v below u_k."""

    U: np.ndarray
    V_uv: np.ndarray
    V_vu: np.ndarray
    multiplicity: tuple
    u: int
    v: int
    seed: int

    @property
    def draws(self) -> int:
        return self.U.shape[0]

    def F(self, draw: int) -> EmpiricalF:
        return EmpiricalF(self.V_uv[draw])

    def F_rev(self, draw: int) -> EmpiricalF:
        return EmpiricalF(self.V_vu[draw])

    def pooled_F(self) -> EmpiricalF:
        return EmpiricalF(self.V_uv.ravel())


def estimate_blowup_statistics(spec: SamplerSpec, bspec: BlowUpSpec, u: int, v: int,
                               n_draws: int, seed: int) -> BlowUpStatistics:
    if u == v:
        raise ValueError("u and v must be distinct template vertices")
    if min(bspec.multiplicity[u], bspec.multiplicity[v]) < MIN_MULTIPLICITY:
        raise ValueError(f"multiplicity below {MIN_MULTIPLICITY}; limits are not meaningful")
    g, block = blow_up(bspec)
    sampler = prepare(spec, g)
    block = np.asarray(block)
    wu, wv = np.flatnonzero(block == u), np.flatnonzero(block == v)

    def work(size, rng):
        x = sampler.latents(size, rng)
        xu, xv = x[:, wu], x[:, wv]
        rank_v = np.argsort(np.argsort(xv, axis=1, kind="stable"), axis=1)
        return ((rank_v + 0.5) / len(wv),
                below_counts(xu, xv) / len(wu),
                below_counts(xv, xu) / len(wv))

    parts = chunked(int(n_draws), seed, ("blowup", spec.kind, u, v), work, chunk=256)
    U, Vuv, Vvu = (np.concatenate([p[i] for p in parts]) for i in range(3))
    return BlowUpStatistics(U, Vuv, Vvu, bspec.multiplicity, u, v, seed)


FFI_BOUND = 2.0 / 3.0


def check_inverse_and_ffi(F: EmpiricalF, F_rev: EmpiricalF, tol: float = 0.05,
                          ffi_tol: float = 0.02, grid: int = 1000) -> TestReport:
    """(a) F_rev is the right-continuous inverse of F up to ``tol`` in sup
    distance; (b) E X^2 + E Y^2 >= 2/3 - ffi_tol for X ~ F, Y ~ F_rev."""
    xs = (np.arange(grid) + 0.5) / grid
    dist = float(np.max(np.abs(F_rev(xs) - F.inverse_at(xs))))
    functional = F.second_moment() + F_rev.second_moment()
    passed = dist <= tol and functional >= FFI_BOUND - ffi_tol
    return TestReport("inverse+ffi", functional, 0, None, passed, None,
                      (len(F.samples), len(F_rev.samples)), method="deterministic",
                      details={"sup_distance": dist, "functional": functional,
                               "uniform_consistent": abs(functional - FFI_BOUND) <= ffi_tol})


def summarize_blowup(stats: BlowUpStatistics, tol: float = 0.05, ffi_tol: float = 0.02) -> TestReport:
    """Per-draw inverse/functional checks plus KS tests of one U and one V per draw."""
    per = [check_inverse_and_ffi(stats.F(d), stats.F_rev(d), tol, ffi_tol) for d in range(stats.draws)]
    functional = float(np.mean([r.details["functional"] for r in per]))
    sup = float(max(r.details["sup_distance"] for r in per))
    ks_v = ks_uniform(stats.V_uv[:, 0])
    ks_u = ks_uniform(stats.U[:, 0])
    return TestReport(
        "blowup", functional, 0, ks_v.p_value,
        all(r.passed for r in per), None, (stats.draws,) + tuple(stats.multiplicity),
        {"seed": stats.seed}, "ks+deterministic",
        {"functional_mean": functional,
         "uniform_consistent": abs(functional - FFI_BOUND) <= ffi_tol,
         "max_sup_distance": sup,
         "ks_V_statistic": ks_v.statistic, "ks_V_p": ks_v.p_value,
         "ks_U_statistic": ks_u.statistic, "ks_U_p": ks_u.p_value,
         "V_mean": float(stats.V_uv.mean()),
         "V_two_point_fraction": float(np.isin(stats.V_uv, (0.0, 1.0)).mean())})


def truncation_ladder(spec: SamplerSpec, template, u: int, v: int, n_draws: int, seed: int,
                      levels=(50, 100, 200)) -> list[dict]:
    """Blow-up summaries at increasing multiplicities, exposing truncation drift."""
    out = []
    for m in levels:
        stats = estimate_blowup_statistics(spec, BlowUpSpec.uniform(template, m), u, v, n_draws, seed)
        rep = summarize_blowup(stats)
        out.append({"multiplicity": m, **{k: rep.details[k] for k in
                                           ("functional_mean", "ks_V_p", "ks_U_p", "max_sup_distance")}})
    base = out[-1]["functional_mean"]
    for row in out:
        row["drift"] = row["functional_mean"] - base
    return out
