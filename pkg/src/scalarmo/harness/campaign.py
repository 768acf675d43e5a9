"""Experiment campaigns: parameter grids, profiles, seeds and the campaign file."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from ..evolve import EAParams
from ..landscape import InstanceParams

SCHEMA = "scalarmo-campaign/1"
DEFAULT_MASTER_SEED = 20140917

# fixed order so that adding a kind to a campaign never reshuffles seeds
KIND_ORDER = ("norm", "aug")

_INSTANCE_STREAM = 0
_RUN_STREAM = 1


def norm_eps_grid(step: int = 100) -> list[float]:
    """eps = l / step for l in 0..step."""
    return [float(Fraction(l, step)) for l in range(step + 1)]


def aug_eps_grid() -> list[float]:
    """eps = l * 10**-k for l in 0..10 and k in -1..2, duplicates removed."""
    values = {Fraction(l) * Fraction(10) ** -k for l in range(11) for k in range(-1, 3)}
    return [float(v) for v in sorted(values)]


DESK_AUG_EPS = [0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0]


@dataclass
class Campaign:
    master_seed: int = DEFAULT_MASTER_SEED
    rhos: list[float] = field(default_factory=lambda: [-0.7, 0.0, 0.7])
    # delta_j = j / delta_divisions * pi/2 for j in 1..delta_divisions-1
    delta_divisions: int = 20
    kinds: list[str] = field(default_factory=lambda: ["norm", "aug"])
    eps_grids: dict[str, list[float]] = field(
        default_factory=lambda: {"norm": norm_eps_grid(10), "aug": list(DESK_AUG_EPS)}
    )
    runs: int = 15
    n: int = 32
    k: int = 4
    zbar: tuple[float, float] = (1.0, 1.0)
    # None means the instance-size default (lambda = n, rate 1/n, n generations)
    lambda_offspring: int | None = None
    flip_rate: float | None = None
    max_iterations: int | None = None

    def __post_init__(self) -> None:
        self.zbar = (float(self.zbar[0]), float(self.zbar[1]))
        self.eps_grids = {kind: sorted(set(float(e) for e in grid)) for kind, grid in self.eps_grids.items()}
        self.validate()

    def validate(self) -> None:
        if not self.rhos:
            raise ValueError("campaign needs at least one rho")
        if self.delta_divisions < 2:
            raise ValueError("delta grid is empty (delta_divisions must be >= 2)")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not self.kinds:
            raise ValueError("campaign needs at least one scalarizer kind")
        for kind in self.kinds:
            if kind not in KIND_ORDER:
                raise ValueError(f"unsupported scalarizer kind {kind!r}")
            grid = self.eps_grids.get(kind)
            if not grid:
                raise ValueError(f"empty eps grid for kind {kind!r}")
            if kind == "norm" and not all(0.0 <= e <= 1.0 for e in grid):
                raise ValueError("norm eps values must lie in [0, 1]")
            if any(e < 0 for e in grid):
                raise ValueError("eps values must be nonnegative")
        for rho in self.rhos:
            InstanceParams(self.n, self.k, rho, 0)
        self.ea_params(0)

    @property
    def deltas(self) -> list[float]:
        d = self.delta_divisions
        return [j / d * (math.pi / 2) for j in range(1, d)]

    def ea_params(self, seed: int) -> EAParams:
        return EAParams(
            lambda_offspring=self.lambda_offspring or self.n,
            flip_rate=self.flip_rate or 1.0 / self.n,
            max_iterations=self.max_iterations or self.n,
            seed=seed,
        )

    def instance_params(self, rho_index: int) -> InstanceParams:
        return InstanceParams(self.n, self.k, self.rhos[rho_index], instance_seed(self.master_seed, rho_index))

    def cells(self):
        """Every (rho_index, kind, delta_index, eps_index) in canonical order."""
        for ri in range(len(self.rhos)):
            for kind in self.kinds:
                for di in range(len(self.deltas)):
                    for ei in range(len(self.eps_grids[kind])):
                        yield ri, kind, di, ei

    def n_runs_total(self) -> int:
        cells = sum(len(self.deltas) * len(self.eps_grids[kind]) for kind in self.kinds)
        return cells * len(self.rhos) * self.runs

    # -- file format --

    def to_text(self) -> str:
        lines = [f"schema = {json.dumps(SCHEMA)}"]
        for key, value in asdict(self).items():
            if isinstance(value, tuple):
                value = list(value)
            lines.append(f"{key} = {json.dumps(value)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Campaign:
        values = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"line {lineno}: expected 'key = value'")
            try:
                values[key.strip()] = json.loads(value)
            except json.JSONDecodeError as exc:
                raise ValueError(f"line {lineno}: bad value for {key.strip()!r}: {exc}") from None
        schema = values.pop("schema", None)
        if schema != SCHEMA:
            raise ValueError(f"unsupported campaign schema {schema!r}, expected {SCHEMA!r}")
        unknown = set(values) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown campaign keys: {sorted(unknown)}")
        if "zbar" in values:
            values["zbar"] = tuple(values["zbar"])
        return cls(**values)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path: str | Path) -> Campaign:
        return cls.from_text(Path(path).read_text())


def desk_profile(master_seed: int = DEFAULT_MASTER_SEED) -> Campaign:
    return Campaign(master_seed=master_seed)


def paper_profile(master_seed: int = DEFAULT_MASTER_SEED) -> Campaign:
    return Campaign(
        master_seed=master_seed,
        rhos=[round(0.1 * i, 1) for i in range(-9, 10)],
        delta_divisions=100,
        eps_grids={"norm": norm_eps_grid(100), "aug": aug_eps_grid()},
        runs=30,
        n=128,
        k=4,
    )


PROFILES = {"desk": desk_profile, "paper": paper_profile}


def _seed64(entropy: int, key: tuple[int, ...]) -> int:
    ss = np.random.SeedSequence(entropy, spawn_key=key)
    return int(ss.generate_state(1, np.uint64)[0])


def instance_seed(master_seed: int, rho_index: int) -> int:
    return _seed64(master_seed, (_INSTANCE_STREAM, rho_index))


def run_seed(master_seed: int, rho_index: int, kind: str, delta_index: int, eps_index: int, run: int) -> int:
    """Per-run seed derived from grid coordinates only, never from scheduling."""
    key = (_RUN_STREAM, rho_index, KIND_ORDER.index(kind), delta_index, eps_index, run)
    return _seed64(master_seed, key)
