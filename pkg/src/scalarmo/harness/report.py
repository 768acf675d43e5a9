"""CSV tables, the policy comparison summary, dynamics dumps and figures."""

from __future__ import annotations

import logging
import math
from dataclasses import astuple, fields
from pathlib import Path

import numpy as np

from ..evolve import run_ea
from ..indicators import ApproxSet, ReferenceData
from ..scalarize import iso_line, make_config
from . import analysis as an
from . import store
from .campaign import Campaign, run_seed
from .runner import instance_id, run_id

log = logging.getLogger(__name__)

ANALYSIS_DIR = "analysis"
FIGURE_DIR = "figures"
DYNAMICS_DIR = "dynamics"

INDICATOR_FIELDS = [
    "instance_id",
    "rho",
    "scalarizer",
    "eps_policy",
    "eps",
    "hv_diff",
    "eps_ind",
    "n_points",
    "replicate",
]
REGRESSION_FIELDS = ["instance_id", "rho", "kind", "branch", "slope", "intercept", "pearson_r", "n_points"]
REGISTRY_FIELDS = ["instance_id", "delta_index", "z1", "z2", "t_value", "run_id"]
REFSET_FIELDS = ["instance_id", "z1", "z2", "run_id"]
DYNAMICS_FIELDS = ["section", "generation", "index", "z1", "z2", "value"]

# (eps, delta as a fraction of pi/2) of the showcased single runs
DYNAMICS_SHOWCASE = [(0.0, 0.3), (1.0, 0.3), (0.6, 0.7)]


def _names(cls) -> list[str]:
    return [f.name for f in fields(cls)]


def _rows(items) -> list[tuple]:
    return [astuple(i) for i in items]


def _analysis_tables(rows: list[store.RunRow]):
    registry = an.build_best_registry(rows)
    angles = an.analyze_angles(rows)
    deviations, stars = an.analyze_deviation(rows, registry)
    return registry, angles, deviations, stars


def _regressions(angles: list[an.AngleRow]) -> list[tuple]:
    out = []
    keys = sorted({(a.instance_id, a.rho, a.kind) for a in angles})
    for iid, rho, kind in keys:
        sel = [a for a in angles if a.instance_id == iid and a.kind == kind]
        for branch, mirrored in (("theta1", False), ("theta2_mirrored", True)):
            try:
                fit = an.fit_phi_theta(sel, mirrored=mirrored)
            except ValueError as exc:
                log.warning("no regression for %s/%s/%s: %s", iid, kind, branch, exc)
                continue
            out.append((iid, rho, kind, branch, fit.slope, fit.intercept, fit.pearson_r, fit.n_points))
    return out


def write_analysis(rows: list[store.RunRow], out_dir: str | Path) -> Path:
    """Angle, deviation, best-eps, regression, registry and reference-set tables."""
    dest = Path(out_dir) / ANALYSIS_DIR
    registry, angles, deviations, stars = _analysis_tables(rows)
    store.write_csv(dest / "angles.csv", _names(an.AngleRow), _rows(angles))
    store.write_csv(dest / "deviation.csv", _names(an.DeviationRow), _rows(deviations))
    store.write_csv(dest / "eps_star.csv", _names(an.EpsStarRow), _rows(stars))
    store.write_csv(dest / "regression.csv", REGRESSION_FIELDS, _regressions(angles))
    store.write_csv(
        dest / "best_registry.csv",
        REGISTRY_FIELDS,
        [(iid, di, e.z[0], e.z[1], e.t_value, e.run_id) for (iid, di), e in sorted(registry.items())],
    )
    refs = an.reference_sets(rows)
    store.write_csv(
        dest / "reference_set.csv",
        REFSET_FIELDS,
        [(iid, z[0], z[1], tag) for iid, s in refs.items() for z, tag in zip(s.points, s.tags)],
    )
    return dest


def _instances(rows):
    return sorted({(r.instance_id, r.rho) for r in rows})


def indicator_table(rows: list[store.RunRow], stars=None):
    """Per-replicate indicator rows for every uniform eps and every named policy.

    Returns (indicator rows, {instance_id: {policy name: scores}}).
    """
    if stars is None:
        _, _, _, stars = _analysis_tables(rows)
    refs = an.reference_sets(rows)
    table, named = [], {}
    for iid, rho in _instances(rows):
        refdata = ReferenceData((0.0, 0.0), refs[iid])
        for kind in sorted({r.kind for r in rows if r.instance_id == iid}):
            for eps in sorted({r.eps for r in rows if r.instance_id == iid and r.kind == kind}):
                pol = an.EpsPolicy(kind, uniform_eps=eps)
                for s in an.evaluate_policy(rows, pol, refdata, iid):
                    table.append((iid, rho, kind, "uniform", eps, s.hv_diff, s.eps_ind, s.n_points, s.replicate))
        named[iid] = {}
        for pol in an.table3_policies(rows, stars, iid):
            scores = an.evaluate_policy(rows, pol.policy, refdata, iid)
            named[iid][pol.name] = (pol.policy, scores)
            if not pol.policy.is_uniform:
                for s in scores:
                    table.append((iid, rho, pol.policy.kind, "nonuniform", "", s.hv_diff, s.eps_ind, s.n_points, s.replicate))
    return table, named


def summary_rows(rows, named, alpha_level: float = 0.05) -> list[an.SummaryRow]:
    out = []
    for iid, rho in _instances(rows):
        policies = named.get(iid, {})
        if len(policies) < 2:
            continue
        scores = {name: sc for name, (_, sc) in policies.items()}
        hv, ei = an.compare_policies(scores, alpha_level)
        for name, (pol, sc) in policies.items():
            out.append(
                an.SummaryRow(
                    iid,
                    rho,
                    name,
                    pol.kind,
                    pol.label if not pol.is_uniform else f"uniform:{pol.uniform_eps!r}",
                    float(np.mean([s.hv_diff for s in sc])),
                    hv[name],
                    float(np.mean([s.eps_ind for s in sc])),
                    ei[name],
                    len(sc),
                )
            )
    return out


def write_indicators(rows: list[store.RunRow], out_dir: str | Path):
    dest = Path(out_dir) / ANALYSIS_DIR
    table, named = indicator_table(rows)
    store.write_csv(dest / "indicators.csv", INDICATOR_FIELDS, table)
    return dest, table, named


def _nearest(values, target):
    return min(range(len(values)), key=lambda i: (abs(values[i] - target), i))


def dynamics_dump(c: Campaign, instances, rows, rho_index: int, kind: str, delta_index: int, eps_index: int, run: int = 0):
    """Re-run one stored run with offspring recording; returns CSV rows.

    Sections: ``parent`` path, ``offspring`` clouds and ``iso`` level-set
    polylines at a few generations, and the best-known ``front``.
    """
    iid = instance_id(rho_index)
    inst = instances[iid]
    delta, eps = c.deltas[delta_index], c.eps_grids[kind][eps_index]
    cfg = make_config(kind, delta, eps, c.zbar)
    seed = run_seed(c.master_seed, rho_index, kind, delta_index, eps_index, run)
    rec = run_ea(inst, cfg, c.ea_params(seed), dump_offspring=True)
    iters = len(rec.values) - 1
    shown = sorted({1, max(1, iters // 4), max(1, iters // 2), iters})
    out = []
    for g, (v, z) in enumerate(zip(rec.values, rec.parents)):
        out.append(("parent", g, 0, float(z[0]), float(z[1]), float(v)))
    for g in shown:
        for i, z in enumerate(rec.offspring[g - 1]):
            out.append(("offspring", g, i, float(z[0]), float(z[1]), ""))
        for i, p in enumerate(iso_line(cfg, float(rec.values[g]))):
            out.append(("iso", g, i, p[0], p[1], float(rec.values[g])))
    front = an.reference_sets([r for r in rows if r.instance_id == iid]).get(iid, ApproxSet())
    for i, z in enumerate(front.points):
        out.append(("front", "", i, z[0], z[1], ""))
    return run_id(rho_index, kind, delta_index, eps_index, run), out


def write_dynamics(c: Campaign, out_dir: str | Path, rows: list[store.RunRow]) -> list[Path]:
    if "norm" not in c.kinds:
        return []
    instances = store.load_instances(out_dir)
    ri = _nearest(c.rhos, -0.7)
    grid = c.eps_grids["norm"]
    paths = []
    for eps, frac in DYNAMICS_SHOWCASE:
        di = _nearest(c.deltas, frac * math.pi / 2)
        ei = _nearest(grid, eps)
        rid, dump = dynamics_dump(c, instances, rows, ri, "norm", di, ei)
        path = Path(out_dir) / DYNAMICS_DIR / f"{rid}.csv"
        store.write_csv(path, DYNAMICS_FIELDS, dump)
        paths.append(path)
    return paths


def write_report(out_dir: str | Path, figures: bool = True) -> Path:
    """Regenerate every table (and optionally figure) from the results store."""
    out = Path(out_dir)
    rows = store.load_results(out)
    write_analysis(rows, out)
    dest, table, named = write_indicators(rows, out)
    summary = summary_rows(rows, named)
    store.write_csv(dest / "summary.csv", _names(an.SummaryRow), _rows(summary))
    campaign_file = out / store.CAMPAIGN
    dyn = []
    if rows and campaign_file.exists():
        dyn = write_dynamics(Campaign.load(campaign_file), out, rows)
    if figures and rows:
        from . import plotting

        plotting.render_all(out, rows, dyn)
    return dest
