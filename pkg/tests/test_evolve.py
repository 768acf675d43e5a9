import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scalarmo.evolve import EAParams, mutate, run_batch, run_ea
from scalarmo.landscape import InstanceParams, constant_instance, generate_instance
from scalarmo.scalarize import make_aug, make_chebychev, make_norm, sgen_many

ALL10 = np.array(list(itertools.product([0, 1], repeat=10)), dtype=bool)


@pytest.fixture(scope="module")
def inst32():
    return generate_instance(InstanceParams(n=32, k=4, rho=-0.7, seed=77))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(lambda_offspring=0, flip_rate=0.1, max_iterations=1),
        dict(lambda_offspring=1, flip_rate=0.0, max_iterations=1),
        dict(lambda_offspring=1, flip_rate=1.0, max_iterations=1),
        dict(lambda_offspring=1, flip_rate=0.1, max_iterations=0),
    ],
)
def test_params_rejected(kwargs):
    with pytest.raises(ValueError):
        EAParams(**kwargs)


def test_defaults_follow_length():
    p = EAParams.defaults(128, seed=3)
    assert (p.lambda_offspring, p.flip_rate, p.max_iterations, p.seed) == (128, 1 / 128, 128, 3)


def test_mutation_hamming_mean():
    rng = np.random.default_rng(0)
    n, p = 128, 1 / 128
    parent = rng.random(n) < 0.5
    kids = mutate(np.broadcast_to(parent, (100_000, n)), p, rng)
    dist = (kids ^ parent).sum(axis=1)
    assert abs(dist.mean() - n * p) <= 0.05 * n * p
    # unchanged offspring: (1 - 1/n)^n, close to 1/e
    assert abs((dist == 0).mean() - math.exp(-1)) <= 0.02


def test_mutation_keeps_input():
    bits = np.zeros(16, dtype=bool)
    out = mutate(bits, 0.5, np.random.default_rng(1))
    assert not bits.any()
    assert out.shape == bits.shape and out.dtype == bool


def test_flat_landscape_keeps_value():
    inst = constant_instance(12, 2, 0.5)
    rec = run_ea(inst, make_chebychev(0.6), EAParams.defaults(12, seed=9))
    assert rec.final_value == rec.values[0]
    assert np.all(rec.values == rec.values[0])


def test_record_shapes_and_budget(inst32):
    p = EAParams(lambda_offspring=7, flip_rate=0.05, max_iterations=13, seed=4)
    rec = run_ea(inst32, make_norm(0.4, 0.2), p, dump_offspring=True)
    assert rec.evaluations == 7 * 13
    assert rec.values.shape == (14,)
    assert rec.parents.shape == (14, 2)
    assert len(rec.offspring) == 13 and rec.offspring[0].shape == (7, 2)
    assert rec.final_value == rec.values[-1]
    assert rec.final_z == tuple(rec.parents[-1])
    assert inst32.evaluate_many(rec.final_bits).tolist() == list(rec.final_z)


def test_trajectory_consistent_with_offspring(inst32):
    cfg = make_aug(0.9, 0.05)
    rec = run_ea(inst32, cfg, EAParams.defaults(32, seed=12), dump_offspring=True)
    for t, kids in enumerate(rec.offspring):
        best = sgen_many(cfg, kids).min()
        assert rec.values[t + 1] == min(rec.values[t], best)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**63), st.floats(0.05, 1.5), st.floats(0, 1))
def test_elitism(inst32, seed, delta, eps):
    rec = run_ea(inst32, make_norm(delta, eps), EAParams.defaults(32, seed=seed))
    assert np.all(np.diff(rec.values) <= 0)


def test_reproducible(inst32):
    cfg, p = make_norm(0.7, 0.3), EAParams.defaults(32, seed=2**60 + 5)
    assert run_ea(inst32, cfg, p) == run_ea(inst32, cfg, p)
    assert run_ea(inst32, cfg, EAParams.defaults(32, seed=6)) != run_ea(inst32, cfg, p)


def test_batch_equals_single(inst32):
    cfg = make_aug(0.3, 0.1)
    params = [EAParams.defaults(32, seed=s) for s in (1, 2, 3, 99)]
    batch = run_batch(inst32, cfg, params, dump_offspring=True)
    for p, rec in zip(params, batch):
        single = run_ea(inst32, cfg, p, dump_offspring=True)
        assert rec == single
        assert all(np.array_equal(a, b) for a, b in zip(rec.offspring, single.offspring))


def test_batch_requires_shared_shape(inst32):
    with pytest.raises(ValueError):
        run_batch(inst32, make_chebychev(0.5), [EAParams(4, 0.1, 3, 0), EAParams(5, 0.1, 3, 1)])
    assert run_batch(inst32, make_chebychev(0.5), []) == []


def test_offspring_preferred_on_ties():
    # on a flat landscape every generation replaces the parent by offspring 0
    inst = constant_instance(8, 1, 0.3)
    p = EAParams(lambda_offspring=3, flip_rate=0.3, max_iterations=5, seed=21)
    rec = run_ea(inst, make_chebychev(0.5), p)
    rng = np.random.default_rng(21)
    parent = rng.random(8) < 0.5
    masks = rng.random((5, 3, 8)) < 0.3
    for t in range(5):
        parent = parent ^ masks[t, 0]
    assert np.array_equal(rec.final_bits, parent)


def separable_hits(runs=30):
    hits = 0
    for s in range(runs):
        inst = generate_instance(InstanceParams(n=10, k=0, rho=-0.7, seed=1000 + s))
        cfg = make_chebychev((s + 1) / (runs + 1) * math.pi / 2)
        best = sgen_many(cfg, inst.evaluate_many(ALL10)).min()
        rec = run_ea(inst, cfg, EAParams(10, 0.1, 50 * 10, seed=s))
        hits += rec.final_value == best
    return hits


def test_separable_instances_reach_exhaustive_optimum():
    assert separable_hits() >= 28
