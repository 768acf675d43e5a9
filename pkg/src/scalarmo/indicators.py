"""Pareto filtering and quality indicators for bi-objective maximization."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .scalarize import ScalarizerConfig, sgen


def dominates(a, b) -> bool:
    """True if ``a`` Pareto-dominates ``b`` (maximization)."""
    return a[0] >= b[0] and a[1] >= b[1] and (a[0] > b[0] or a[1] > b[1])


@dataclass
class ApproxSet:
    """Objective vectors with optional per-point provenance tags."""

    points: list[tuple[float, float]] = field(default_factory=list)
    tags: list[object] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.points = [(float(p[0]), float(p[1])) for p in self.points]
        if not self.tags:
            self.tags = [None] * len(self.points)
        if len(self.tags) != len(self.points):
            raise ValueError("tags and points must have equal length")

    def __len__(self) -> int:
        return len(self.points)

    def array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=np.float64).reshape(-1, 2)


@dataclass
class ReferenceData:
    ref_point: tuple[float, float]
    ref_set: ApproxSet


def _as_set(points) -> ApproxSet:
    return points if isinstance(points, ApproxSet) else ApproxSet(list(points))


def pareto_filter(points) -> ApproxSet:
    """Non-dominated, de-duplicated points sorted by descending z1.

    The first occurrence of a duplicated vector keeps its tag.
    """
    s = _as_set(points)
    order = sorted(range(len(s)), key=lambda i: (-s.points[i][0], -s.points[i][1], i))
    kept, tags = [], []
    best_z2 = -math.inf
    for i in order:
        z1, z2 = s.points[i]
        # sorted by z1 desc then z2 desc: a point survives iff its z2 beats every earlier point
        if z2 > best_z2:
            kept.append((z1, z2))
            tags.append(s.tags[i])
            best_z2 = z2
    return ApproxSet(kept, tags)


def final_angle(z) -> float:
    """Polar angle of an objective vector w.r.t. the f1 axis."""
    z1, z2 = float(z[0]), float(z[1])
    if z1 == 0.0 and z2 == 0.0:
        raise ValueError("final angle undefined at the origin")
    if z1 == 0.0:
        return math.pi / 2
    return math.atan(z2 / z1)


def deviation_to_best(z, zstar, tcfg: ScalarizerConfig) -> float:
    """Relative excess of the Chebychev value of ``z`` over that of ``zstar``."""
    if tcfg.eps != 0:
        raise ValueError("deviation to best is measured with a pure Chebychev config")
    best = sgen(tcfg, zstar)
    if best == 0:
        raise ValueError("Chebychev value of the best point is zero")
    return (sgen(tcfg, z) - best) / best


def hypervolume(points, ref_point=(0.0, 0.0)) -> float:
    """Area dominated by ``points`` and bounded below by ``ref_point``."""
    s = pareto_filter(points)
    r1, r2 = float(ref_point[0]), float(ref_point[1])
    for z1, z2 in s.points:
        if not (z1 > r1 and z2 > r2):
            raise ValueError(f"point {(z1, z2)} does not dominate the reference point {(r1, r2)}")
    area = 0.0
    prev_z2 = r2
    for z1, z2 in s.points:  # descending z1, ascending z2
        area += (z1 - r1) * (z2 - prev_z2)
        prev_z2 = z2
    return area


def hypervolume_difference(points, refdata: ReferenceData) -> float:
    return hypervolume(refdata.ref_set, refdata.ref_point) - hypervolume(points, refdata.ref_point)


def multiplicative_epsilon(points, ref_set) -> float:
    """Smallest factor by which ``points`` must be scaled to weakly dominate ``ref_set``."""
    a = _as_set(points).array()
    r = _as_set(ref_set).array()
    if len(a) == 0 or len(r) == 0:
        raise ValueError("both sets must be non-empty")
    if (a <= 0).any() or (r <= 0).any():
        raise ValueError("multiplicative epsilon requires strictly positive objective values")
    ratios = r[:, None, :] / a[None, :, :]  # (|R|, |A|, 2)
    return float(ratios.max(axis=2).min(axis=1).max())
