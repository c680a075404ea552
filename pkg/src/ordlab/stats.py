"""Goodness-of-fit and two-sample tests on count vectors.

Large-count cases use the usual chi-square asymptotics.  When an expected
count falls below ``FLOOR`` the one-sample test switches to an exact
multinomial p-value (enumerated when the outcome space is small, simulated
otherwise) and the two-sample test to a seeded permutation p-value.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, lgamma, log

import numpy as np
from scipy import stats as sps

FLOOR = 5.0
EXACT_LIMIT = 200_000
RESAMPLES = 20_000


@dataclass(frozen=True)
class TestResult:
    __test__ = False  # not a pytest class

    statistic: float
    dof: int
    p_value: float
    method: str


def _pearson(obs, exp):
    mask = exp > 0
    return float(((obs[mask] - exp[mask]) ** 2 / exp[mask]).sum())


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _log_multinomial(counts, probs):
    out = lgamma(sum(counts) + 1)
    for c, p in zip(counts, probs):
        if c:
            if p <= 0:
                return -np.inf
            out += c * log(p) - lgamma(c + 1)
    return out


def gof_test(counts, probs, seed: int = 0) -> TestResult:
    """Test observed category counts against null probabilities."""
    obs = np.asarray(counts, dtype=float)
    p = np.asarray(probs, dtype=float)
    p = p / p.sum()
    n = obs.sum()
    if n == 0:
        return TestResult(0.0, 0, 1.0, "empty")
    if np.any((p == 0) & (obs > 0)):
        return TestResult(float("inf"), int((p > 0).sum()) - 1, 0.0, "impossible-category")
    keep = p > 0
    obs, p = obs[keep], p[keep]
    exp = n * p
    dof = len(p) - 1
    stat = _pearson(obs, exp)
    if dof == 0:
        return TestResult(0.0, 0, 1.0, "degenerate")
    if exp.min() >= FLOOR:
        return TestResult(stat, dof, float(sps.chi2.sf(stat, dof)), "chi2")
    n = int(n)
    if comb(n + len(p) - 1, len(p) - 1) <= EXACT_LIMIT:
        ref = _log_multinomial(obs.astype(int), p)
        tot = 0.0
        for c in _compositions(n, len(p)):
            lp = _log_multinomial(c, p)
            if lp <= ref + 1e-9:
                tot += np.exp(lp)
        return TestResult(stat, dof, float(min(1.0, tot)), "exact-multinomial")
    rng = np.random.default_rng(seed)
    sims = rng.multinomial(n, p, size=RESAMPLES)
    sim_stats = ((sims - exp) ** 2 / exp).sum(axis=1)
    pv = (1 + int((sim_stats >= stat - 1e-12).sum())) / (1 + RESAMPLES)
    return TestResult(stat, dof, pv, "monte-carlo-multinomial")


def two_sample_test(c1, c2, seed: int = 0) -> TestResult:
    """Are two count vectors over the same categories drawn from one law?"""
    a = np.asarray(c1, dtype=np.int64)
    b = np.asarray(c2, dtype=np.int64)
    keep = (a + b) > 0
    a, b = a[keep], b[keep]
    if len(a) <= 1 or a.sum() == 0 or b.sum() == 0:
        return TestResult(0.0, 0, 1.0, "degenerate")
    table = np.vstack([a, b]).astype(float)
    exp = table.sum(1, keepdims=True) * table.sum(0, keepdims=True) / table.sum()
    stat = _pearson(table, exp)
    dof = len(a) - 1
    if exp.min() >= FLOOR:
        return TestResult(stat, dof, float(sps.chi2.sf(stat, dof)), "chi2")
    rng = np.random.default_rng(seed)
    pooled = a + b
    sims_a = rng.multivariate_hypergeometric(pooled, int(a.sum()), size=RESAMPLES)
    sims = np.stack([sims_a, pooled - sims_a], axis=1).astype(float)
    sim_stats = ((sims - exp) ** 2 / exp).sum(axis=(1, 2))
    pv = (1 + int((sim_stats >= stat - 1e-9).sum())) / (1 + RESAMPLES)
    return TestResult(stat, dof, pv, "permutation")


def bonferroni(p_values, significance: float) -> tuple[float, bool]:
    """Smallest p-value and whether the family passes at ``significance``."""
    ps = list(p_values)
    if not ps:
        return 1.0, True
    pmin = min(ps)
    return pmin, pmin * len(ps) >= significance


def ks_uniform(samples) -> TestResult:
    res = sps.kstest(np.asarray(samples, dtype=float), "uniform")
    return TestResult(float(res.statistic), 0, float(res.pvalue), "ks")
