"""Scalarized (1+lambda)-EA with independent bit-flip mutation.

Every run owns a private random stream. The stream is consumed in a fixed
order (initial solution, then one mutation mask block per generation), so
:func:`run_ea` and the batched :func:`run_batch` produce identical records.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .landscape import Instance
from .scalarize import ScalarizerConfig, sgen_many


@dataclass(frozen=True)
class EAParams:
    lambda_offspring: int
    flip_rate: float
    max_iterations: int
    seed: int | np.random.SeedSequence = 0

    def __post_init__(self) -> None:
        if self.lambda_offspring < 1:
            raise ValueError("lambda_offspring must be >= 1")
        if not 0.0 < self.flip_rate < 1.0:
            raise ValueError("flip_rate must lie in (0, 1)")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")

    @classmethod
    def defaults(cls, n: int, seed=0) -> EAParams:
        """lambda = n offspring, rate 1/n, n generations."""
        return cls(lambda_offspring=n, flip_rate=1.0 / n, max_iterations=n, seed=seed)


@dataclass
class RunRecord:
    final_bits: np.ndarray
    final_z: tuple[float, float]
    final_value: float
    # index 0 holds the initial parent; index t the parent after generation t
    values: np.ndarray
    parents: np.ndarray
    evaluations: int
    coords: dict = field(default_factory=dict)
    offspring: list[np.ndarray] | None = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RunRecord):
            return NotImplemented
        return (
            np.array_equal(self.final_bits, other.final_bits)
            and self.final_z == other.final_z
            and self.final_value == other.final_value
            and np.array_equal(self.values, other.values)
            and np.array_equal(self.parents, other.parents)
            and self.evaluations == other.evaluations
            and self.coords == other.coords
        )


def make_rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def mutate(bits: np.ndarray, flip_rate: float, rng: np.random.Generator) -> np.ndarray:
    """Flip every bit independently with probability ``flip_rate``."""
    bits = np.asarray(bits, dtype=bool)
    return bits ^ (rng.random(bits.shape) < flip_rate)


def _draw(rng: np.random.Generator, n: int, p: EAParams) -> tuple[np.ndarray, np.ndarray]:
    init = rng.random(n) < 0.5
    masks = rng.random((p.max_iterations, p.lambda_offspring, n)) < p.flip_rate
    return init, masks


def run_ea(inst: Instance, cfg: ScalarizerConfig, p: EAParams, dump_offspring: bool = False) -> RunRecord:
    return run_batch(inst, cfg, [p], dump_offspring=dump_offspring)[0]


def run_batch(
    inst: Instance, cfg: ScalarizerConfig, params: list[EAParams], dump_offspring: bool = False
) -> list[RunRecord]:
    """Run several independent EAs on one instance and scalarizer in lock step.

    All entries of ``params`` must share lambda and the iteration budget.
    """
    if not params:
        return []
    lam, iters = params[0].lambda_offspring, params[0].max_iterations
    if any(q.lambda_offspring != lam or q.max_iterations != iters for q in params):
        raise ValueError("batched runs must share lambda_offspring and max_iterations")
    n, b = inst.n, len(params)

    inits, masks = zip(*(_draw(make_rng(q.seed), n, q) for q in params))
    parent = np.stack(inits)  # (b, n)
    masks = np.stack(masks, axis=1)  # (iters, b, lam, n)

    pz = inst.evaluate_many(parent)
    pval = sgen_many(cfg, pz)
    values = np.empty((iters + 1, b))
    parents_z = np.empty((iters + 1, b, 2))
    values[0], parents_z[0] = pval, pz
    clouds: list[list[np.ndarray]] = [[] for _ in range(b)]
    rows = np.arange(b)

    for t in range(iters):
        kids = parent[:, None, :] ^ masks[t]  # (b, lam, n)
        kz = inst.evaluate_many(kids)
        kval = sgen_many(cfg, kz)
        best = np.argmin(kval, axis=1)  # first minimum among offspring
        bval = kval[rows, best]
        take = bval <= pval  # offspring wins ties against the parent
        parent = np.where(take[:, None], kids[rows, best], parent)
        pz = np.where(take[:, None], kz[rows, best], pz)
        pval = np.where(take, bval, pval)
        values[t + 1], parents_z[t + 1] = pval, pz
        if dump_offspring:
            for i in range(b):
                clouds[i].append(kz[i].copy())

    out = []
    for i in range(b):
        out.append(
            RunRecord(
                final_bits=parent[i].copy(),
                final_z=(float(pz[i, 0]), float(pz[i, 1])),
                final_value=float(pval[i]),
                values=values[:, i].copy(),
                parents=parents_z[:, i].copy(),
                evaluations=iters * lam,
                offspring=clouds[i] if dump_offspring else None,
            )
        )
    return out
