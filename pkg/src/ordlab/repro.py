"""Named reproduction experiments.  Each returns a JSON-ready dict with a
list of individual checks and an overall ``passed`` flag."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import bernoulli
from .graph import Graph, bull, complete, cycle, disjoint_union, empty, path
from .lab import (
    check_consistency,
    check_cross_consistency,
    check_uniformity,
    estimate_blowup_statistics,
    estimate_distribution,
    pattern_index,
    summarize_blowup,
    tuple_counts,
)
from .rng import derive_seed
from .samplers import CopyPattern, SamplerSpec, embed_spectral, prepare
from .templates import BlowUpSpec, Template, blow_up, classify_template
from .verdict import Label


@dataclass
class ReproConfig:
    seed: int = 0
    samples: int | None = None
    significance: float = 1e-3
    alpha: float | str | None = None
    epsilon: float | str | None = None
    kmax: int | None = None

    def n(self, default: int) -> int:
        return int(self.samples) if self.samples else default

    def sub(self, *names) -> int:
        return derive_seed(self.seed, *names)


def _check(name, value, target, tol) -> dict:
    value, target = float(value), float(target)
    return {"check": name, "value": value, "target": target, "tolerance": float(tol),
            "passed": abs(value - target) <= tol}


def _flag(name, ok, **extra) -> dict:
    return {"check": name, "passed": bool(ok), **extra}


def _result(name, checks, **metrics) -> dict:
    return {"experiment": name, "passed": all(c["passed"] for c in checks), "checks": checks, "metrics": metrics}


def _alpha(cfg, default):
    return default if cfg.alpha in (None, "auto") else float(cfg.alpha)


def _prob(counts, n, sigma) -> float:
    return counts[pattern_index(sigma)] / n


# -- experiments -------------------------------------------------------------------


def uniform_baseline(cfg: ReproConfig) -> dict:
    n = cfg.n(100_000)
    uni = SamplerSpec("uniform")
    rep = check_uniformity(uni, path(4), cfg.kmax or 4, n, cfg.significance, cfg.sub("uniform", "gof"))
    con = check_consistency(uni, bull(), cfg.kmax or 3, n, cfg.significance, cfg.sub("uniform", "cons"))[-1]
    return _result("uniform-baseline", [
        _flag("P4 uniformity not rejected", rep.passed, p_value=rep.p_value),
        _flag("bull consistency not rejected", con.passed, p_value=con.p_value),
    ], samples=n)


def block_k2k1(cfg: ReproConfig) -> dict:
    n = cfg.n(1_000_000)
    g = disjoint_union(complete(2), complete(1))
    dist = estimate_distribution(SamplerSpec("block"), g, (0, 1, 2), n, cfg.sub("block", "dist"))
    se = 4 * math.sqrt(0.25 * 0.75 / n)
    checks = []
    for order in itertools.permutations((0, 1, 2)):
        contiguous = abs(order.index(0) - order.index(1)) == 1
        p = dist.probability(order)
        if contiguous:
            checks.append(_check(f"P{order}", p, 0.25, se))
        else:
            checks.append(_check(f"P{order}", p, 0.0, 0.0))
    rej = check_uniformity(SamplerSpec("block"), g, 3, min(n, 100_000), cfg.significance, cfg.sub("block", "gof"))
    checks.append(_flag("uniformity rejected", not rej.passed, p_value=rej.p_value))
    return _result("block-K2K1", checks, samples=n, probabilities=dist.to_dict()["probabilities"])


def spectral_p3(cfg: ReproConfig) -> dict:
    n = cfg.n(1_000_000)
    eps = 0.25 if cfg.epsilon in (None, "auto") else float(cfg.epsilon)
    spec = SamplerSpec("spectral", epsilon=eps)
    dist = estimate_distribution(spec, path(3), (0, 1, 2), n, cfg.sub("spectral", "dist"))
    middle = dist.probability((0, 1, 2)) + dist.probability((2, 1, 0))
    target = math.acos((1 - 2 * eps) / (2 - 2 * eps)) / math.pi
    b = embed_spectral(path(3), eps)
    gram_err = float(np.abs(b.T @ b - (np.eye(3) + eps * path(3).adjacency_matrix())).max())
    rej = check_uniformity(spec, path(3), 3, min(n, 100_000), cfg.significance, cfg.sub("spectral", "gof"))
    return _result("spectral-P3", [
        _check("middle probability", middle, target, 0.003),
        _check("Gram identity", gram_err, 0.0, 1e-10),
        _flag("uniformity rejected", not rej.passed, p_value=rej.p_value),
    ], samples=n, epsilon=eps, middle_probability=middle)


def mod1_p3(cfg: ReproConfig) -> dict:
    n = cfg.n(1_000_000)
    alpha = _alpha(cfg, 0.0)
    spec = SamplerSpec("mod1_edge", alpha=alpha)
    g = path(3)
    dist = estimate_distribution(spec, g, (0, 1, 2), n, cfg.sub("mod1", "dist"))
    # leaf 0 (degree 1) against centre 1 (degree 2), two edges
    delta = dist.probability((0, 1, 2)) - dist.probability((1, 0, 2))
    target = (1 - 2) * bernoulli.edgedist_delta(3, alpha) / g.m
    checks = [_check("delta leaf/centre", delta, target, 0.003)]
    n_marg = min(n, 100_000)
    for name, h in (("P3", path(3)), ("P4", path(4)), ("C4", cycle(4))):
        subsets = list(itertools.combinations(range(h.n), h.n - 1))
        rep = check_uniformity(SamplerSpec("mod1_edge", alpha=alpha), h, h.n, n_marg, cfg.significance,
                               cfg.sub("mod1", "marg", name), tuples=subsets)
        checks.append(_flag(f"{name} (n-1)-marginals uniform", rep.passed, p_value=rep.p_value))
    rej = check_uniformity(spec, g, 3, n_marg, cfg.significance, cfg.sub("mod1", "gof"), tuples=[(0, 1, 2)])
    checks.append(_flag("P3 full-tuple uniformity rejected", not rej.passed, p_value=rej.p_value))
    return _result("mod1-P3", checks, samples=n, alpha=alpha, delta=delta)


def doublebroom_p5(cfg: ReproConfig) -> dict:
    n = cfg.n(1_000_000)
    spec = SamplerSpec("double_broom", alpha=cfg.alpha if cfg.alpha is not None else "auto",
                       path_len=3, left_leaves=10, right_leaves=10)
    sampler = prepare(spec)
    p4 = [(leaf, 0, 1, 2) for leaf in range(3, 13)] + [(0, 1, 2, leaf) for leaf in range(13, 23)]
    r4 = check_uniformity(spec, None, 4, n, cfg.significance, cfg.sub("broom", "p4"), tuples=p4)
    r3 = check_uniformity(spec, None, 3, n, cfg.significance, cfg.sub("broom", "p3"), tuples=[(0, 1, 2)])
    r5 = check_uniformity(spec, None, 5, n, cfg.significance, cfg.sub("broom", "p5"), tuples=[(3, 0, 1, 2, 13)])
    p5 = r5.details["reports"][0]
    return _result("doublebroom-P5", [
        _flag("central P3 uniform", r3.passed, p_value=r3.p_value),
        _flag("every induced P4 uniform", r4.passed, p_value=r4.p_value, tuples=len(p4)),
        _flag("P5 uniformity rejected at p < significance", p5["p_value"] < cfg.significance,
              p_value=p5["p_value"], statistic=p5["statistic"]),
    ], samples=n, alpha=sampler.params["alpha"])


def flower_inconsistency(cfg: ReproConfig) -> dict:
    n = cfg.n(1_000_000)
    alpha = cfg.alpha if cfg.alpha is not None else "auto"
    checks = []
    for k in (1, 2):
        rep = check_consistency(SamplerSpec("flower", alpha=alpha, petals=k), None, cfg.kmax or 4,
                                min(n, 100_000), cfg.significance, cfg.sub("flower", "cons", k))[-1]
        checks.append(_flag(f"consistent on flower with {k} petal(s)", rep.passed, p_value=rep.p_value,
                            tests=rep.details["tests"]))
    shared = SamplerSpec("flower", alpha=alpha, petals=(2,), drop_center=True)
    split = SamplerSpec("flower", alpha=alpha, petals=(1, 1), drop_center=True)
    cross = check_cross_consistency(shared, None, split, None, shared.graph(), n, cfg.significance,
                                    cfg.sub("flower", "cross"))
    worst = max(r.p_value for r in cross[:-1])
    checks.append(_flag("P3+P3 laws differ between ambient graphs (every comparison p < significance)",
                        worst < cfg.significance, max_p_value=worst, family_p=cross[-1].p_value,
                        min_statistic=min(r.statistic for r in cross[:-1])))
    return _result("flower-inconsistency", checks, samples=n)


def template_kplusk(cfg: ReproConfig) -> dict:
    t = Template(empty(2), (True, True))
    verdict = classify_template(t)
    checks = [_flag("classified NON_UNIFORM", verdict.label == Label.NON_UNIFORM, certificate=verdict.certificate)]
    g, _ = blow_up(BlowUpSpec.uniform(t, 2))
    rej = check_uniformity(SamplerSpec("block"), g, 4, cfg.n(100_000), cfg.significance, cfg.sub("kk", "gof"))
    checks.append(_flag("block witness rejects uniformity", not rej.passed, p_value=rej.p_value))
    draws = 40_000
    stats = estimate_blowup_statistics(SamplerSpec("block"), BlowUpSpec.uniform(t, 50), 0, 1, draws,
                                       cfg.sub("kk", "blowup"))
    rep = summarize_blowup(stats)
    checks.append(_check("V mean", rep.details["V_mean"], 0.5, 0.01))
    checks.append(_check("V two-point mass", rep.details["V_two_point_fraction"], 1.0, 0.0))
    checks.append(_flag("functional above 0.9", rep.details["functional_mean"] > 0.9,
                        value=rep.details["functional_mean"]))
    return _result("template-KplusK", checks, draws=draws, verdict=verdict.to_dict())


def _addx_events(n_clique: int):
    """Pattern masks over the tuple (0..n-1, y1, y2): clique values in
    label order, and y1 (resp. both y) below the k-th."""
    k_total = n_clique + 2
    masks = {(j, k): np.zeros(math.factorial(k_total), dtype=bool) for j in (1, 2) for k in range(1, n_clique + 1)}
    for idx, sigma in enumerate(itertools.permutations(range(k_total))):
        pos = {v: r for r, v in enumerate(sigma)}
        if any(pos[i] > pos[i + 1] for i in range(n_clique - 1)):
            continue
        for k in range(1, n_clique + 1):
            if pos[n_clique] < pos[k - 1]:
                masks[(1, k)][idx] = True
                if pos[n_clique + 1] < pos[k - 1]:
                    masks[(2, k)][idx] = True
    return masks


def addx_grid(cfg: ReproConfig) -> dict:
    n_samples = cfg.n(1_000_000)
    alphas = [Fraction(0), Fraction(3, 10), Fraction(1, 2)]
    checks, points = [], []
    for n in (2, 3, 4):
        g = disjoint_union(complete(n), empty(2))
        masks = _addx_events(n)
        for a in alphas:
            spec = SamplerSpec("disjoint_copies", alpha=float(a), copy_pattern=CopyPattern.find(complete(n), g))
            sampler = prepare(spec, g)
            counts = tuple_counts(sampler, [tuple(range(n + 2))], n_samples, cfg.sub("addx", n, str(a)))[0]
            for (j, k), mask in masks.items():
                exact = bernoulli.addx_probability(n, k, a, j)
                est = counts[mask].sum() / n_samples
                se = math.sqrt(float(exact) * (1 - float(exact)) / n_samples)
                c = _check(f"addx n={n} k={k} j={j} alpha={a}", est, exact, 4 * se)
                checks.append(c)
                points.append({"n": n, "k": k, "j": j, "alpha": str(a), "exact": str(exact), "estimate": est})
    anchors = {(1, 1): Fraction(1, 8), (1, 2): Fraction(3, 8), (2, 1): Fraction(1, 24)}
    for (j, k), val in anchors.items():
        est = next(p["estimate"] for p in points if p["n"] == 2 and p["alpha"] == "0" and p["j"] == j and p["k"] == k)
        checks.append(_check(f"anchor n=2 k={k} j={j} alpha=0", est, val, 0.002))
        checks.append(_check(f"closed form n=2 k={k} j={j} alpha=0", bernoulli.addx_probability(2, k, Fraction(0), j),
                             val, 0.0))
    return _result("addx-grid", checks, samples_per_point=n_samples, points=points)


def edgedist_grid(cfg: ReproConfig) -> dict:
    n_samples = cfg.n(10_000_000)
    checks, points = [], []
    # single-edge graphs put sign -1 on vertices 0 and 1, +1 elsewhere
    for a in (0.0, 0.2, 0.4, 0.6, 0.8):
        g = Graph(3, [(0, 1)])
        counts = tuple_counts(prepare(SamplerSpec("mod1_edge", alpha=a), g), [(0, 1, 2)], n_samples,
                              cfg.sub("edgedist", "pair", a))[0]
        p1 = _prob(counts, n_samples, (0, 2, 1))
        p2 = _prob(counts, n_samples, (2, 0, 1))
        est = p1 - p2
        se = math.sqrt(max(p1 + p2 - est ** 2, 1e-12) / n_samples)
        exact = bernoulli.edgedist_delta(3, a)
        checks.append(_check(f"pair n=3 alpha={a}", est, exact, 4 * se))
        points.append({"alpha": a, "exact": exact, "estimate": est, "se": se})
    checks.append(_check("pair anchor n=3 alpha=0", bernoulli.edgedist_delta(3, Fraction(0)), -0.25, 0.0))
    g4 = Graph(4, [(0, 1)])
    counts = tuple_counts(prepare(SamplerSpec("mod1_edge", alpha=0.0), g4), [(0, 1, 2, 3)], n_samples,
                          cfg.sub("edgedist", "triple"))[0]
    est = _prob(counts, n_samples, (0, 2, 3, 1)) - _prob(counts, n_samples, (2, 0, 3, 1))
    checks.append(_check("triple n=4 alpha=0 (Monte Carlo)", est, 1 / 12, 0.002))
    checks.append(_check("triple n=4 alpha=0 (closed form)", bernoulli.edgedist_delta(4, Fraction(0), "triple"),
                         1 / 12, 0.0))
    return _result("edgedist-grid", checks, samples_per_point=n_samples, points=points, triple_estimate=est)


EXPERIMENTS = {
    "uniform-baseline": uniform_baseline,
    "block-K2K1": block_k2k1,
    "spectral-P3": spectral_p3,
    "mod1-P3": mod1_p3,
    "doublebroom-P5": doublebroom_p5,
    "flower-inconsistency": flower_inconsistency,
    "template-KplusK": template_kplusk,
    "addx-grid": addx_grid,
    "edgedist-grid": edgedist_grid,
}


def run_experiment(name: str, cfg: ReproConfig) -> dict:
    if name not in EXPERIMENTS:
        raise KeyError(f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}")
    return EXPERIMENTS[name](cfg)

