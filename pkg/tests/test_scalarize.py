import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from scalarmo.scalarize import (
    Direction,
    KinkCrossed,
    ScalarizerConfig,
    iso_line,
    kink_point,
    level_set_residual,
    make_aug,
    make_chebychev,
    make_config,
    make_norm,
    make_ws,
    opening_angles,
    sgen,
    sgen_many,
)

GRID = [j / 100 * math.pi / 2 for j in range(1, 100)]

deltas = st.floats(0.01, math.pi / 2 - 0.01)
unit = st.floats(0.0, 1.0)
# a 1e-3 lattice keeps differences far above rounding
coord = st.integers(0, 1000).map(lambda i: i / 1000)
points = st.tuples(coord, coord)


def test_chebychev_example():
    cfg = ScalarizerConfig(1.0, 0.0, 1.0, 1.0, 1.0, 1.0)
    assert sgen(cfg, (0.6, 0.8)) == pytest.approx(0.4, abs=1e-15)


def test_weighted_sum_example():
    cfg = ScalarizerConfig(0.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    assert sgen(cfg, (0.6, 0.8)) == pytest.approx(0.6, abs=1e-15)


def test_norm_example():
    cfg = make_norm(math.pi / 4, 0.5)
    # 0.5 * sqrt2 * 0.5 + 0.5 * (sqrt2/2 * 0.5 * 2)
    expect = 0.5 * math.sqrt(2) * 0.5 + 0.5 * (math.sqrt(2) / 2 * 0.5 * 2)
    assert sgen(cfg, (0.5, 0.5)) == pytest.approx(expect, abs=1e-12)
    assert sgen(cfg, (0.5, 0.5)) == pytest.approx(0.7071068, abs=1e-7)


def test_norm_at_diagonal_weights():
    cfg = make_norm(math.pi / 4, 0.3)
    assert cfg.lambda1 == pytest.approx(math.sqrt(2), abs=1e-12)
    assert cfg.lambda2 == pytest.approx(math.sqrt(2), abs=1e-12)
    assert cfg.w1 == pytest.approx(math.sqrt(2) / 2, abs=1e-12)
    assert cfg.w2 == pytest.approx(math.sqrt(2) / 2, abs=1e-12)


def test_constructor_fields():
    d = 0.4
    assert (make_ws(d).alpha, make_ws(d).eps) == (0.0, 1.0)
    assert (make_ws(d).w1, make_ws(d).w2) == (math.cos(d), math.sin(d))
    assert (make_chebychev(d).alpha, make_chebychev(d).eps) == (1.0, 0.0)
    a = make_aug(d, 3.0)
    assert (a.alpha, a.eps, a.w1, a.w2) == (1.0, 3.0, 1.0, 1.0)
    n = make_norm(d, 0.25)
    assert (n.alpha, n.eps) == (0.75, 0.25)
    assert n.lambda1 == 1 / math.cos(d) and n.lambda2 == 1 / math.sin(d)
    assert n.zbar == (1.0, 1.0)


@pytest.mark.parametrize("delta", [0.0, math.pi / 2, -0.1, 2.0])
def test_axis_directions_rejected(delta):
    with pytest.raises(ValueError):
        make_norm(delta, 0.5)
    with pytest.raises(ValueError):
        Direction(delta)


@pytest.mark.parametrize(
    "args",
    [(-0.1, 1, 1, 1, 1, 1), (0, 0, 1, 1, 1, 1), (1, 0, 0, 1, 1, 1), (1, 1, 1, 1, 1, -1)],
)
def test_invalid_configs_rejected(args):
    with pytest.raises(ValueError):
        ScalarizerConfig(*args)


def test_eps_ranges_enforced():
    with pytest.raises(ValueError):
        make_norm(0.3, 1.2)
    with pytest.raises(ValueError):
        make_aug(0.3, -0.01)
    with pytest.raises(ValueError):
        make_config("pbi", 0.3, 0.1)


@given(deltas)
def test_direction_is_unit(delta):
    d = Direction(delta)
    assert d.d1**2 + d.d2**2 == pytest.approx(1.0, abs=1e-12)


def test_special_case_reduction_on_grid():
    z = np.random.default_rng(5).random((100, 2))
    for d in GRID:
        assert np.array_equal(sgen_many(make_norm(d, 0.0), z), sgen_many(make_chebychev(d), z))
        assert np.max(np.abs(sgen_many(make_norm(d, 1.0), z) - sgen_many(make_ws(d), z))) <= 1e-12


def test_scalar_and_vector_agree_bitwise():
    z = np.random.default_rng(1).random((200, 2))
    cfg = make_aug(0.7, 0.05)
    many = sgen_many(cfg, z)
    assert all(sgen(cfg, zz) == v for zz, v in zip(z, many))


def test_opening_angles_examples():
    ws = ScalarizerConfig(0.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    a = opening_angles(ws)
    assert a.theta1 == pytest.approx(-math.pi / 4, abs=1e-15)
    assert a.theta2 == pytest.approx(3 * math.pi / 4, abs=1e-15)
    t = opening_angles(make_chebychev(0.6))
    assert (t.theta1, t.theta2) == (0.0, math.pi / 2)
    n = opening_angles(make_norm(math.pi / 4, 0.5))
    assert n.theta1 == pytest.approx(-0.321751, abs=1e-6)
    assert n.theta1 == pytest.approx(math.atan(-1 / 3), abs=1e-12)


def test_residual_examples():
    cfg = make_chebychev(0.5)
    assert level_set_residual(cfg, (0.9, 0.2), 0.0, 1e-4) == 0.0
    ws = ScalarizerConfig(0.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    assert level_set_residual(ws, (0.3, 0.6), -math.pi / 4, 1e-4) <= 1e-12
    norm = make_norm(math.pi / 4, 0.5)
    assert level_set_residual(norm, (0.9, 0.3), -0.321751, 1e-4) <= 1e-9


def test_residual_detects_kink_crossing():
    cfg = make_norm(math.pi / 4, 0.5)
    # just below the diagonal ray, a move up-left crosses it
    with pytest.raises(KinkCrossed):
        level_set_residual(cfg, (0.5, 0.4999), opening_angles(cfg).theta2, 1e-3)
    with pytest.raises(ValueError):
        level_set_residual(cfg, (0.5, 0.3), 0.0, 0.0)


def test_wrong_angle_leaves_level_set():
    cfg = make_norm(math.pi / 4, 0.5)
    assert level_set_residual(cfg, (0.9, 0.3), 0.0, 1e-4) > 1e-6


def test_iso_line_is_a_level_set():
    cfg = make_norm(0.5, 0.3)
    v = 0.4
    # arms short enough to stay below zbar
    lower, kink, upper = iso_line(cfg, v, length=0.1)
    assert kink == kink_point(cfg, v)
    for p in (lower, kink, upper):
        assert sgen(cfg, p) == pytest.approx(v, abs=1e-12)
    # the kink lies on the direction ray
    assert cfg.lambda1 * (1 - kink[0]) == pytest.approx(cfg.lambda2 * (1 - kink[1]), abs=1e-12)


@settings(max_examples=200)
@given(deltas, st.integers(0, 100).map(lambda i: i / 100), points, points)
def test_dominance_implies_smaller_value(delta, eps, a, b):
    lo = (min(a[0], b[0]), min(a[1], b[1]))
    hi = (max(a[0], b[0]), max(a[1], b[1]))
    assume(lo != hi)
    for cfg in (make_norm(delta, eps), make_aug(delta, eps)):
        if eps > 0:
            assert sgen(cfg, hi) < sgen(cfg, lo)
        else:
            assert sgen(cfg, hi) <= sgen(cfg, lo)


@given(deltas, unit, points)
def test_value_nonnegative_zero_only_at_utopia(delta, eps, z):
    cfg = make_norm(delta, eps)
    v = sgen(cfg, z)
    assert v >= 0
    assert (v == 0) == (z == (1.0, 1.0))


@given(deltas, unit)
def test_norm_theta1_interval(delta, eps):
    a = opening_angles(make_norm(delta, eps))
    assert delta - math.pi / 2 - 1e-12 <= a.theta1 <= 0
    assert math.pi / 2 <= a.theta2 < math.pi


@given(deltas, st.floats(0.0, 1e6))
def test_aug_theta1_interval(delta, eps):
    a = opening_angles(make_aug(delta, eps))
    assert -math.pi / 4 - 1e-12 <= a.theta1 <= 0
    assert math.pi / 2 <= a.theta2 < math.pi


@settings(max_examples=50)
@given(deltas, unit, st.floats(0.01, 100.0), st.integers(0, 2**32 - 1))
def test_common_scaling(delta, eps, factor, seed):
    cfg = make_norm(delta, eps)
    z = np.random.default_rng(seed).random((30, 2))
    base, scaled = sgen_many(cfg, z), sgen_many(cfg.scaled(factor), z)
    np.testing.assert_allclose(scaled, factor * base, rtol=1e-12, atol=1e-15)
    assert np.argmin(scaled) == np.argmin(base)
