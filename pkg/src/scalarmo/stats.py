"""Regression, correlation and the Mann-Whitney rank-sum test."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

# sample sizes above this use the normal approximation in "auto" mode
EXACT_LIMIT = 20


@dataclass(frozen=True)
class RegressionFit:
    slope: float
    intercept: float
    pearson_r: float
    n_points: int


@dataclass(frozen=True)
class RankTestResult:
    u_statistic: float
    p_value: float
    n1: int
    n2: int


def pearson(xs, ys) -> float:
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0:
        raise ValueError("x has zero variance")
    if syy == 0:
        return 0.0
    return float(np.clip((dx @ dy) / math.sqrt(sxx * syy), -1.0, 1.0))


def linear_regression(xs, ys) -> RegressionFit:
    """Ordinary least squares fit of ys on xs."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be 1-d arrays of equal length")
    if len(x) < 2:
        raise ValueError("need at least two points")
    dx = x - x.mean()
    sxx = float(dx @ dx)
    if sxx == 0:
        raise ValueError("x has zero variance; slope undefined")
    slope = float(dx @ (y - y.mean())) / sxx
    intercept = float(y.mean() - slope * x.mean())
    return RegressionFit(slope, intercept, pearson(x, y), len(x))


def rankdata(values) -> np.ndarray:
    """Ranks starting at 1, ties receive the mean of their ranks."""
    v = np.asarray(values, dtype=np.float64)
    order = np.argsort(v, kind="mergesort")
    ranks = np.empty(len(v))
    sv = v[order]
    i = 0
    while i < len(v):
        j = i
        while j + 1 < len(v) and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _u_from_ranks(ranks: np.ndarray, n1: int) -> float:
    return float(ranks[:n1].sum() - n1 * (n1 + 1) / 2.0)


def _exact_p(ranks: np.ndarray, n1: int, u_obs: float) -> float:
    """Two-sided exact p by counting rank-sum subsets (dynamic programming).

    Ranks are doubled so mid-ranks become integers. The p-value is the
    probability of a U at least as far from its mean as the observed one.
    """
    n = len(ranks)
    n2 = n - n1
    r2 = np.rint(ranks * 2).astype(int)
    total = int(r2.sum())
    # ways[c][s]: number of size-c subsets with doubled rank sum s
    ways = [np.zeros(total + 1, dtype=object) for _ in range(n1 + 1)]
    ways[0][0] = 1
    for r in r2:
        for c in range(n1, 0, -1):
            ways[c][r:] = ways[c][r:] + ways[c - 1][: total + 1 - r]
    dist = ways[n1]
    count = math.comb(n, n1)
    mean_u = n1 * n2 / 2.0
    far = abs(u_obs - mean_u)
    offset = n1 * (n1 + 1)  # doubled
    hits = 0
    for s2 in np.nonzero(dist)[0]:
        u = (s2 - offset) / 2.0
        if abs(u - mean_u) >= far - 1e-9:
            hits += dist[s2]
    return min(1.0, hits / count)


def _normal_p(ranks: np.ndarray, n1: int, u_obs: float) -> float:
    n = len(ranks)
    n2 = n - n1
    _, counts = np.unique(ranks, return_counts=True)
    tie = float(((counts**3 - counts)).sum())
    var = n1 * n2 / 12.0 * ((n + 1) - tie / (n * (n - 1)))
    if var <= 0:
        return 1.0
    dev = abs(u_obs - n1 * n2 / 2.0) - 0.5  # continuity correction
    z = max(dev, 0.0) / math.sqrt(var)
    return min(1.0, math.erfc(z / math.sqrt(2.0)))


def mann_whitney_u(a, b, method: str = "auto") -> RankTestResult:
    """Mann-Whitney U test for two independent samples.

    ``u_statistic`` is the U of sample ``a``. With ``method="auto"`` the
    exact null distribution is used up to ``EXACT_LIMIT`` total
    observations, and a tie-corrected normal approximation with continuity
    correction above that.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    n1, n2 = len(a), len(b)
    if n1 == 0 or n2 == 0:
        raise ValueError("both samples must be non-empty")
    ranks = rankdata(np.concatenate([a, b]))
    u = _u_from_ranks(ranks, n1)
    if method == "auto":
        method = "exact" if n1 + n2 <= EXACT_LIMIT else "normal"
    if method == "exact":
        p = _exact_p(ranks, n1, u)
    elif method == "normal":
        p = _normal_p(ranks, n1, u)
    else:
        raise ValueError(f"unknown method {method!r}")
    return RankTestResult(u, p, n1, n2)


def exact_p_by_enumeration(a, b) -> float:
    """Exact two-sided p by listing every assignment of ranks to sample ``a``.

    Exponential cost; meant as a cross-check for small samples.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    n1, n2 = len(a), len(b)
    ranks = rankdata(np.concatenate([a, b]))
    mean_u = n1 * n2 / 2.0
    far = abs(_u_from_ranks(ranks, n1) - mean_u)
    hits = total = 0
    for idx in combinations(range(n1 + n2), n1):
        u = ranks[list(idx)].sum() - n1 * (n1 + 1) / 2.0
        total += 1
        hits += abs(u - mean_u) >= far - 1e-9
    return hits / total


def outperformance_counts(groups: dict[str, list[float]], alpha_level: float = 0.05, lower_is_better: bool = True):
    """For each group, how many other groups are significantly better.

    A group H outperforms G when the two-sided rank-sum p-value is below
    ``alpha_level`` and H has the better median.
    """
    if len(groups) < 2:
        raise ValueError("need at least two groups")
    for name, sample in groups.items():
        if len(sample) < 2:
            raise ValueError(f"group {name!r} needs at least two observations")
    medians = {name: float(np.median(s)) for name, s in groups.items()}
    counts = {name: 0 for name in groups}
    names = list(groups)
    for g, h in combinations(names, 2):
        res = mann_whitney_u(groups[g], groups[h])
        if res.p_value >= alpha_level or medians[g] == medians[h]:
            continue
        g_better = medians[g] < medians[h] if lower_is_better else medians[g] > medians[h]
        counts[h if g_better else g] += 1
    return counts
