import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sps

from scalarmo.stats import (
    EXACT_LIMIT,
    exact_p_by_enumeration,
    linear_regression,
    mann_whitney_u,
    outperformance_counts,
    pearson,
    rankdata,
)

small_ints = st.lists(st.integers(0, 6).map(float), min_size=1, max_size=7)


def test_identity_line():
    fit = linear_regression([0.1, 0.5, 0.9], [0.1, 0.5, 0.9])
    assert fit.slope == pytest.approx(1.0, abs=1e-15)
    assert fit.intercept == pytest.approx(0.0, abs=1e-15)
    assert fit.pearson_r == pytest.approx(1.0, abs=1e-15)


def test_constant_response():
    fit = linear_regression([1, 2, 3], [4, 4, 4])
    assert (fit.slope, fit.pearson_r) == (0.0, 0.0)


def test_hand_dataset():
    # Sxx = 10, Sxy = 6, Syy = 6, means (3, 4)
    fit = linear_regression([1, 2, 3, 4, 5], [2, 4, 5, 4, 5])
    assert fit.slope == pytest.approx(0.6, abs=1e-14)
    assert fit.intercept == pytest.approx(2.2, abs=1e-14)
    assert fit.pearson_r == pytest.approx(6 / math.sqrt(60), abs=1e-14)
    assert fit.n_points == 5


def test_regression_errors():
    with pytest.raises(ValueError):
        linear_regression([1, 1, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        linear_regression([1], [1])
    with pytest.raises(ValueError):
        linear_regression([1, 2], [1, 2, 3])
    with pytest.raises(ValueError):
        pearson([2, 2], [1, 3])


def test_residual_orthogonality_and_r2():
    rng = np.random.default_rng(11)
    for _ in range(50):
        x = rng.random(30)
        y = 0.4 * x + rng.normal(0, 0.2, 30)
        fit = linear_regression(x, y)
        res = y - (fit.intercept + fit.slope * x)
        scale = np.abs(y).sum() + np.abs(x * y).sum()
        assert abs(res.sum()) <= 1e-9 * scale
        assert abs((res * x).sum()) <= 1e-9 * scale
        r2 = 1 - (res @ res) / ((y - y.mean()) @ (y - y.mean()))
        assert fit.pearson_r**2 == pytest.approx(r2, abs=1e-12)
        assert fit.pearson_r == pytest.approx(np.corrcoef(x, y)[0, 1], abs=1e-12)


def test_rankdata_midranks():
    assert rankdata([3.0, 1.0, 3.0, 2.0]).tolist() == [3.5, 1.0, 3.5, 2.0]
    np.testing.assert_array_equal(rankdata([5, 5, 5]), sps.rankdata([5, 5, 5]))


def test_separated_samples():
    res = mann_whitney_u([1, 2, 3], [4, 5, 6], method="exact")
    assert res.u_statistic == 0.0
    assert res.p_value == pytest.approx(0.1, abs=1e-15)
    assert mann_whitney_u([4, 5, 6], [1, 2, 3]).u_statistic == 9.0
    assert exact_p_by_enumeration([1, 2, 3], [4, 5, 6]) == pytest.approx(2 / 20, abs=1e-15)


def test_identical_samples():
    res = mann_whitney_u([1, 2, 3, 4], [1, 2, 3, 4])
    assert res.u_statistic == 8.0
    assert res.p_value == pytest.approx(1.0)
    assert mann_whitney_u([0.5] * 5, [0.5] * 5, method="normal").p_value == 1.0


def test_empty_and_bad_method():
    with pytest.raises(ValueError):
        mann_whitney_u([], [1.0])
    with pytest.raises(ValueError):
        mann_whitney_u([1.0], [2.0], method="bootstrap")


@settings(max_examples=80, deadline=None)
@given(small_ints, small_ints)
def test_exact_matches_enumeration(a, b):
    assert mann_whitney_u(a, b, method="exact").p_value == pytest.approx(exact_p_by_enumeration(a, b), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(small_ints, small_ints, st.randoms())
def test_permutation_invariance(a, b, rnd):
    res = mann_whitney_u(a, b)
    a2, b2 = list(a), list(b)
    rnd.shuffle(a2)
    rnd.shuffle(b2)
    res2 = mann_whitney_u(a2, b2)
    assert res.u_statistic == res2.u_statistic
    assert res.p_value == pytest.approx(res2.p_value, abs=1e-12)


def test_against_scipy():
    rng = np.random.default_rng(2)
    for _ in range(30):
        a, b = rng.random(8), rng.random(7) + 0.2
        ours = mann_whitney_u(a, b, method="exact")
        ref = sps.mannwhitneyu(a, b, alternative="two-sided", method="exact")
        assert ours.u_statistic == ref.statistic
        assert ours.p_value == pytest.approx(ref.pvalue, abs=1e-12)
    for _ in range(30):
        a, b = rng.integers(0, 5, 30), rng.integers(1, 6, 30)
        ours = mann_whitney_u(a, b, method="normal")
        ref = sps.mannwhitneyu(a, b, alternative="two-sided", method="asymptotic", use_continuity=True)
        assert ours.p_value == pytest.approx(ref.pvalue, abs=1e-12)


def test_auto_switches_at_limit():
    a, b = np.arange(10.0), np.arange(10.0) + 3.5
    assert mann_whitney_u(a, b).p_value == mann_whitney_u(a, b, method="exact").p_value
    a, b = np.arange(11.0), np.arange(10.0) + 3.5
    assert len(a) + len(b) > EXACT_LIMIT
    assert mann_whitney_u(a, b).p_value == mann_whitney_u(a, b, method="normal").p_value


def test_exact_and_normal_agree_at_twelve():
    rng = np.random.default_rng(12)
    for _ in range(100):
        a, b = rng.random(12), rng.random(12) + rng.uniform(0, 0.5)
        ex = mann_whitney_u(a, b, method="exact").p_value
        no = mann_whitney_u(a, b, method="normal").p_value
        assert abs(ex - no) <= 0.02


def test_counts_identical_groups():
    g = {name: [0.1, 0.2, 0.3, 0.4] for name in "ABCD"}
    assert outperformance_counts(g) == dict.fromkeys("ABCD", 0)


def test_counts_one_bad_group():
    rng = np.random.default_rng(0)
    groups = {"T": list(rng.random(30) + 5)}
    for name in ("WS", "norm", "aug"):
        groups[name] = list(rng.random(30))
    for name in ("WS", "norm", "aug"):
        assert mann_whitney_u(groups["T"], groups[name], method="exact").p_value < 0.05
    assert outperformance_counts(groups) == {"T": 3, "WS": 0, "norm": 0, "aug": 0}
    flipped = outperformance_counts(groups, lower_is_better=False)
    assert flipped["T"] == 0 and flipped["WS"] == 1


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.floats(0, 1), min_size=2, max_size=8), min_size=2, max_size=5))
def test_counts_bounded(samples):
    groups = {f"g{i}": s for i, s in enumerate(samples)}
    counts = outperformance_counts(groups)
    assert all(0 <= c <= len(groups) - 1 for c in counts.values())


def test_counts_errors():
    with pytest.raises(ValueError):
        outperformance_counts({"a": [1.0, 2.0]})
    with pytest.raises(ValueError):
        outperformance_counts({"a": [1.0, 2.0], "b": [1.0]})
