"""Generalized scalarizing function and the geometry of its level sets.

The general form combines a weighted Chebychev term and a weighted sum,
both measured from a utopian point ``zbar``::

    alpha * max(l1 |zb1 - z1|, l2 |zb2 - z2|) + eps * (w1 |zb1 - z1| + w2 |zb2 - z2|)

Values are minimized; objective vectors are maximized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

KINDS = ("ws", "t", "aug", "norm", "gen")


@dataclass(frozen=True)
class ScalarizerConfig:
    alpha: float
    eps: float
    lambda1: float
    lambda2: float
    w1: float
    w2: float
    zbar: tuple[float, float] = (1.0, 1.0)
    kind: str = "gen"
    delta: float | None = None

    def __post_init__(self) -> None:
        if self.alpha < 0 or self.eps < 0:
            raise ValueError(f"alpha and eps must be nonnegative, got alpha={self.alpha}, eps={self.eps}")
        if self.alpha + self.eps <= 0:
            raise ValueError("alpha + eps must be positive")
        if self.lambda1 <= 0 or self.lambda2 <= 0:
            raise ValueError("Chebychev weights must be positive")
        if self.w1 <= 0 or self.w2 <= 0:
            raise ValueError("linear weights must be positive")
        if self.kind not in KINDS:
            raise ValueError(f"unknown scalarizer kind {self.kind!r}")
        object.__setattr__(self, "zbar", (float(self.zbar[0]), float(self.zbar[1])))

    def scaled(self, factor: float) -> ScalarizerConfig:
        """Same config with both weight pairs multiplied by ``factor``."""
        return replace(
            self,
            lambda1=self.lambda1 * factor,
            lambda2=self.lambda2 * factor,
            w1=self.w1 * factor,
            w2=self.w2 * factor,
        )


@dataclass(frozen=True)
class Direction:
    delta: float

    def __post_init__(self) -> None:
        check_delta(self.delta)

    @property
    def d1(self) -> float:
        return math.cos(self.delta)

    @property
    def d2(self) -> float:
        return math.sin(self.delta)


@dataclass(frozen=True)
class OpeningAngles:
    theta1: float
    theta2: float


class KinkCrossed(ValueError):
    """A level-set probe stepped across the Chebychev kink."""


def check_delta(delta: float) -> None:
    if not 0.0 < delta < math.pi / 2:
        raise ValueError(f"direction angle must lie strictly between 0 and pi/2, got {delta}")


def sgen(cfg: ScalarizerConfig, z) -> float:
    """Scalarized value of a single objective vector."""
    d1 = abs(cfg.zbar[0] - z[0])
    d2 = abs(cfg.zbar[1] - z[1])
    return cfg.alpha * max(cfg.lambda1 * d1, cfg.lambda2 * d2) + cfg.eps * (cfg.w1 * d1 + cfg.w2 * d2)


def sgen_many(cfg: ScalarizerConfig, z: np.ndarray) -> np.ndarray:
    """Vectorized :func:`sgen` over an array of shape (..., 2).

    Evaluates the same floating-point operations in the same order as
    :func:`sgen`, so results agree bit for bit.
    """
    z = np.asarray(z, dtype=np.float64)
    d1 = np.abs(cfg.zbar[0] - z[..., 0])
    d2 = np.abs(cfg.zbar[1] - z[..., 1])
    return cfg.alpha * np.maximum(cfg.lambda1 * d1, cfg.lambda2 * d2) + cfg.eps * (cfg.w1 * d1 + cfg.w2 * d2)


def _chebychev_weights(delta: float) -> tuple[float, float]:
    check_delta(delta)
    return 1.0 / math.cos(delta), 1.0 / math.sin(delta)


def make_ws(delta: float, zbar=(1.0, 1.0)) -> ScalarizerConfig:
    """Weighted sum with weights (cos delta, sin delta)."""
    l1, l2 = _chebychev_weights(delta)
    return ScalarizerConfig(0.0, 1.0, l1, l2, math.cos(delta), math.sin(delta), zbar, "ws", delta)


def make_chebychev(delta: float, zbar=(1.0, 1.0)) -> ScalarizerConfig:
    l1, l2 = _chebychev_weights(delta)
    return ScalarizerConfig(1.0, 0.0, l1, l2, 1.0 / l1, 1.0 / l2, zbar, "t", delta)


def make_aug(delta: float, eps: float, zbar=(1.0, 1.0)) -> ScalarizerConfig:
    """Augmented Chebychev: unit linear weights, free ``eps >= 0``."""
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    l1, l2 = _chebychev_weights(delta)
    return ScalarizerConfig(1.0, float(eps), l1, l2, 1.0, 1.0, zbar, "aug", delta)


def make_norm(delta: float, eps: float, zbar=(1.0, 1.0)) -> ScalarizerConfig:
    """Convex blend ``(1 - eps) * T + eps * WS`` with ``w_i = 1 / lambda_i``."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps must lie in [0, 1], got {eps}")
    l1, l2 = _chebychev_weights(delta)
    return ScalarizerConfig(1.0 - eps, float(eps), l1, l2, 1.0 / l1, 1.0 / l2, zbar, "norm", delta)


def make_config(kind: str, delta: float, eps: float, zbar=(1.0, 1.0)) -> ScalarizerConfig:
    if kind == "norm":
        return make_norm(delta, eps, zbar)
    if kind == "aug":
        return make_aug(delta, eps, zbar)
    if kind == "ws":
        return make_ws(delta, zbar)
    if kind == "t":
        return make_chebychev(delta, zbar)
    raise ValueError(f"unknown scalarizer kind {kind!r}")


def opening_angles(cfg: ScalarizerConfig) -> OpeningAngles:
    a, e = cfg.alpha, cfg.eps
    theta1 = math.atan(-(e * cfg.w1) / (a * cfg.lambda2 + e * cfg.w2))
    theta2 = math.pi / 2 + math.atan((e * cfg.w2) / (a * cfg.lambda1 + e * cfg.w1))
    return OpeningAngles(theta1, theta2)


def _binding(cfg: ScalarizerConfig, z) -> int:
    """Index of the coordinate attaining the Chebychev max (ties go to 1)."""
    t1 = cfg.lambda1 * abs(cfg.zbar[0] - z[0])
    t2 = cfg.lambda2 * abs(cfg.zbar[1] - z[1])
    return 0 if t1 > t2 else 1


def level_set_residual(cfg: ScalarizerConfig, z0, theta: float, step: float) -> float:
    """Change in value after moving ``step`` from ``z0`` along angle ``theta``.

    Along the correct opening angle of the active branch, the value stays
    constant up to rounding. Raises :class:`KinkCrossed` when the move
    changes which Chebychev coordinate is binding.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    z1 = (z0[0] + step * math.cos(theta), z0[1] + step * math.sin(theta))
    if cfg.alpha > 0 and _binding(cfg, z0) != _binding(cfg, z1):
        raise KinkCrossed(f"step {step} crosses the Chebychev kink from {tuple(z0)}")
    return abs(sgen(cfg, z1) - sgen(cfg, z0))


def kink_point(cfg: ScalarizerConfig, value: float) -> tuple[float, float]:
    """Point on the direction ray (where both Chebychev terms tie) with the given value."""
    s1, s2 = 1.0 / cfg.lambda1, 1.0 / cfg.lambda2
    t = value / (cfg.alpha + cfg.eps * (cfg.w1 * s1 + cfg.w2 * s2))
    return cfg.zbar[0] - t * s1, cfg.zbar[1] - t * s2


def iso_line(cfg: ScalarizerConfig, value: float, length: float = 1.0) -> list[tuple[float, float]]:
    """Three-point polyline of the level set: lower arm end, kink, upper arm end."""
    ang = opening_angles(cfg)
    kx, ky = kink_point(cfg, value)
    lower = (kx + length * math.cos(ang.theta1), ky + length * math.sin(ang.theta1))
    upper = (kx + length * math.cos(ang.theta2), ky + length * math.sin(ang.theta2))
    return [lower, (kx, ky), upper]
