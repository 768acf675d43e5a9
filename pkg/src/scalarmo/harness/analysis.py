"""Reductions over completed runs: best-known registry, angle and deviation
tables, opening-angle regressions, and set-based policy evaluation."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from ..indicators import (
    ApproxSet,
    ReferenceData,
    deviation_to_best,
    final_angle,
    hypervolume_difference,
    multiplicative_epsilon,
    pareto_filter,
)
from ..scalarize import make_chebychev, make_config, opening_angles, sgen
from ..stats import RegressionFit, linear_regression, outperformance_counts
from .store import RunRow

LOWER_IS_BETTER = {"hv_diff": True, "eps_ind": True}


@dataclass(frozen=True)
class BestEntry:
    z: tuple[float, float]
    t_value: float
    run_id: str


@dataclass(frozen=True)
class AngleRow:
    instance_id: str
    rho: float
    kind: str
    delta_index: int
    delta: float
    eps_index: int
    eps: float
    mean_phi: float
    theta1: float
    theta2: float
    n_runs: int


@dataclass(frozen=True)
class DeviationRow:
    instance_id: str
    rho: float
    kind: str
    delta_index: int
    delta: float
    eps_index: int
    eps: float
    mean_dev: float
    n_runs: int


@dataclass(frozen=True)
class EpsStarRow:
    instance_id: str
    rho: float
    kind: str
    delta_index: int
    delta: float
    eps_star: float
    mean_dev: float


@dataclass(frozen=True)
class EpsPolicy:
    """Either one eps for every direction, or a per-direction eps map."""

    kind: str  # scalarizer kind: "norm" or "aug"
    uniform_eps: float | None = None
    eps_map: dict[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.uniform_eps is None and not self.eps_map:
            raise ValueError("policy needs a uniform eps or a per-direction map")
        if self.uniform_eps is not None and self.eps_map:
            raise ValueError("policy is either uniform or non-uniform, not both")

    @property
    def is_uniform(self) -> bool:
        return self.uniform_eps is not None

    @property
    def label(self) -> str:
        return "uniform" if self.is_uniform else "nonuniform"

    def eps_for(self, delta_index: int) -> float:
        if self.is_uniform:
            return self.uniform_eps
        try:
            return self.eps_map[delta_index]
        except KeyError:
            raise KeyError(f"non-uniform policy has no eps for direction index {delta_index}") from None


@dataclass(frozen=True)
class PolicyScore:
    replicate: int
    hv_diff: float
    eps_ind: float
    n_points: int


def _by(rows, key):
    groups = defaultdict(list)
    for r in rows:
        groups[key(r)].append(r)
    return groups


def t_value(row: RunRow) -> float:
    return sgen(make_chebychev(row.delta), row.z)


def build_best_registry(rows: list[RunRow]) -> dict[tuple[str, int], BestEntry]:
    """Per (instance, direction), the final vector with the smallest Chebychev value.

    Ties keep the first vector in store order.
    """
    registry: dict[tuple[str, int], BestEntry] = {}
    tcfgs = {}
    for r in rows:
        key = (r.instance_id, r.delta_index)
        tcfg = tcfgs.get(key)
        if tcfg is None:
            tcfg = tcfgs[key] = make_chebychev(r.delta)
        v = sgen(tcfg, r.z)
        cur = registry.get(key)
        if cur is None or v < cur.t_value:
            registry[key] = BestEntry(r.z, v, r.run_id)
    return registry


def analyze_angles(rows: list[RunRow]) -> list[AngleRow]:
    out = []
    for (iid, kind, di, ei), rs in sorted(_by(rows, lambda r: r.cell).items()):
        r0 = rs[0]
        ang = opening_angles(make_config(kind, r0.delta, r0.eps))
        phi = float(np.mean([final_angle(r.z) for r in rs]))
        out.append(AngleRow(iid, r0.rho, kind, di, r0.delta, ei, r0.eps, phi, ang.theta1, ang.theta2, len(rs)))
    return out


def analyze_deviation(rows: list[RunRow], registry) -> tuple[list[DeviationRow], list[EpsStarRow]]:
    """Mean relative deviation to best per cell, and the best eps per direction.

    Ties in the per-direction argmin go to the smaller eps.
    """
    cells = []
    tcfgs = {}
    for (iid, kind, di, ei), rs in sorted(_by(rows, lambda r: r.cell).items()):
        r0 = rs[0]
        if (iid, di) not in registry:
            raise KeyError(f"no best-known entry for instance {iid}, direction {di}")
        tcfg = tcfgs.setdefault(di, make_chebychev(r0.delta))
        zstar = registry[(iid, di)].z
        dev = float(np.mean([deviation_to_best(r.z, zstar, tcfg) for r in rs]))
        cells.append(DeviationRow(iid, r0.rho, kind, di, r0.delta, ei, r0.eps, dev, len(rs)))
    stars = []
    for (iid, kind, di), cs in sorted(_by(cells, lambda c: (c.instance_id, c.kind, c.delta_index)).items()):
        best = min(cs, key=lambda c: (c.mean_dev, c.eps))
        stars.append(EpsStarRow(iid, best.rho, kind, di, best.delta, best.eps, best.mean_dev))
    return cells, stars


def eps_star_map(stars: list[EpsStarRow], instance_id: str, kind: str) -> dict[int, float]:
    return {s.delta_index: s.eps_star for s in stars if s.instance_id == instance_id and s.kind == kind}


DEFAULT_DELTA_RANGE = (0.0, 3 * math.pi / 16)


def phi_theta_points(angles: list[AngleRow], delta_range=DEFAULT_DELTA_RANGE, mirrored: bool = False):
    """(opening angle, mean final angle) pairs for directions in ``delta_range``.

    With ``mirrored`` the upper branch is used instead: directions
    pi/2 - delta, with theta2 and phi reflected through the diagonal so the
    points are comparable with the lower branch.
    """
    lo, hi = delta_range
    xs, ys = [], []
    for a in angles:
        if mirrored:
            d = math.pi / 2 - a.delta
            x, y = math.pi / 2 - a.theta2, math.pi / 2 - a.mean_phi
        else:
            d, x, y = a.delta, a.theta1, a.mean_phi
        if lo < d <= hi + 1e-12:
            xs.append(x)
            ys.append(y)
    return np.array(xs), np.array(ys)


def fit_phi_theta(angles: list[AngleRow], delta_range=DEFAULT_DELTA_RANGE, mirrored: bool = False) -> RegressionFit:
    """Regress mean final angle on the opening angle over the given directions."""
    xs, ys = phi_theta_points(angles, delta_range, mirrored)
    return linear_regression(xs, ys)


def reference_sets(rows: list[RunRow]) -> dict[str, ApproxSet]:
    """Best-known approximation per instance: filter of every final vector."""
    out = {}
    for iid, rs in sorted(_by(rows, lambda r: r.instance_id).items()):
        out[iid] = pareto_filter(ApproxSet([r.z for r in rs], [r.run_id for r in rs]))
    return out


def evaluate_policy(rows: list[RunRow], policy: EpsPolicy, refdata: ReferenceData, instance_id: str) -> list[PolicyScore]:
    """Indicator values of the set formed by replicate r of every direction.

    ``rows`` may hold the whole store; only the instance and kind of the
    policy are used.
    """
    cells = {}
    deltas = set()
    for r in rows:
        if r.instance_id != instance_id or r.kind != policy.kind:
            continue
        deltas.add(r.delta_index)
        cells.setdefault((r.delta_index, r.eps), []).append(r)
    if not deltas:
        raise KeyError(f"no runs for instance {instance_id}, kind {policy.kind}")
    chosen = []
    for di in sorted(deltas):
        eps = policy.eps_for(di)
        if (di, eps) not in cells:
            raise KeyError(f"missing cell: direction {di}, eps {eps}")
        chosen.append(cells[(di, eps)])
    replicates = sorted({r.run for rs in chosen for r in rs})
    scores = []
    for rep in replicates:
        pts = [r.z for rs in chosen for r in rs if r.run == rep]
        s = pareto_filter(pts)
        scores.append(
            PolicyScore(
                rep,
                hypervolume_difference(s, refdata),
                multiplicative_epsilon(s, refdata.ref_set),
                len(s),
            )
        )
    return scores


@dataclass(frozen=True)
class NamedPolicy:
    name: str
    policy: EpsPolicy


def table3_policies(rows: list[RunRow], stars: list[EpsStarRow], instance_id: str) -> list[NamedPolicy]:
    """WS, T and the two per-direction best-eps configurations, where available."""
    kinds = {r.kind for r in rows if r.instance_id == instance_id}
    norm_eps = {r.eps for r in rows if r.instance_id == instance_id and r.kind == "norm"}
    out = []
    if "norm" in kinds and 1.0 in norm_eps:
        out.append(NamedPolicy("WS", EpsPolicy("norm", uniform_eps=1.0)))
    if "norm" in kinds and 0.0 in norm_eps:
        out.append(NamedPolicy("T", EpsPolicy("norm", uniform_eps=0.0)))
    for kind, name in (("norm", "S_norm*"), ("aug", "S_aug*")):
        m = eps_star_map(stars, instance_id, kind)
        if kind in kinds and m:
            out.append(NamedPolicy(name, EpsPolicy(kind, eps_map=m)))
    return out


@dataclass(frozen=True)
class SummaryRow:
    instance_id: str
    rho: float
    algorithm: str
    kind: str
    eps_policy: str
    mean_hv_diff: float
    hv_outperformed_by: int
    mean_eps_ind: float
    eps_outperformed_by: int
    replicates: int


def compare_policies(scores: dict[str, list[PolicyScore]], alpha_level: float = 0.05):
    """Outperformance counts per policy for both indicators."""
    hv = outperformance_counts(
        {k: [s.hv_diff for s in v] for k, v in scores.items()}, alpha_level, LOWER_IS_BETTER["hv_diff"]
    )
    ei = outperformance_counts(
        {k: [s.eps_ind for s in v] for k, v in scores.items()}, alpha_level, LOWER_IS_BETTER["eps_ind"]
    )
    return hv, ei
