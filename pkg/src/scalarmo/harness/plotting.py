"""Static figures rendered from the analysis CSVs."""

from __future__ import annotations

import math
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import store  # noqa: E402

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.figsize": (4.2, 3.2),
    "figure.dpi": 110,
    "savefig.bbox": "tight",
}

# keeps PNG bytes identical between renders
_META = {"Software": None}


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, metadata=_META)
    plt.close(fig)
    return path


def _f(rec, *names):
    return tuple(float(rec[n]) for n in names)


def _eps_colors(values):
    cmap = plt.get_cmap("viridis")
    n = max(len(values) - 1, 1)
    return {e: cmap(i / n) for i, e in enumerate(values)}


def _grouped(recs, key):
    out = defaultdict(list)
    for r in recs:
        out[key(r)].append(r)
    return out


def final_angle_plot(angles, iid, kind, path):
    sel = [a for a in angles if a["instance_id"] == iid and a["kind"] == kind]
    by_eps = _grouped(sel, lambda a: float(a["eps"]))
    colors = _eps_colors(sorted(by_eps))
    fig, ax = plt.subplots()
    for eps, recs in sorted(by_eps.items()):
        recs.sort(key=lambda a: int(a["delta_index"]))
        ax.plot(
            [math.degrees(float(a["delta"])) for a in recs],
            [math.degrees(float(a["mean_phi"])) for a in recs],
            color=colors[eps],
            lw=1,
            label=f"{eps:g}",
        )
    ax.plot([0, 90], [0, 90], "k:", lw=0.7)
    ax.set_xlabel("direction angle (deg)")
    ax.set_ylabel("mean final angle (deg)")
    ax.set_title(f"{iid}, rho={float(sel[0]['rho']):g}, {kind}")
    ax.legend(title="eps", ncol=2, frameon=False)
    return _save(fig, path)


def deviation_plot(devs, iid, kind, path):
    sel = [d for d in devs if d["instance_id"] == iid and d["kind"] == kind]
    by_eps = _grouped(sel, lambda d: float(d["eps"]))
    colors = _eps_colors(sorted(by_eps))
    fig, ax = plt.subplots()
    for eps, recs in sorted(by_eps.items()):
        recs.sort(key=lambda d: int(d["delta_index"]))
        ax.plot(
            [math.degrees(float(d["delta"])) for d in recs],
            [float(d["mean_dev"]) for d in recs],
            color=colors[eps],
            lw=1,
            label=f"{eps:g}",
        )
    ax.set_xlabel("direction angle (deg)")
    ax.set_ylabel("mean relative deviation to best")
    ax.set_title(f"{iid}, rho={float(sel[0]['rho']):g}, {kind}")
    ax.legend(title="eps", ncol=2, frameon=False)
    return _save(fig, path)


def eps_star_plot(stars, kind, path):
    sel = [s for s in stars if s["kind"] == kind]
    fig, ax = plt.subplots()
    for (iid, rho), recs in sorted(_grouped(sel, lambda s: (s["instance_id"], float(s["rho"]))).items()):
        recs.sort(key=lambda s: int(s["delta_index"]))
        ax.plot(
            [math.degrees(float(s["delta"])) for s in recs],
            [float(s["eps_star"]) for s in recs],
            marker="o",
            ms=3,
            lw=0.8,
            label=f"rho={rho:g}",
        )
    ax.set_xlabel("direction angle (deg)")
    ax.set_ylabel("eps with smallest mean deviation")
    if kind == "aug":
        ax.set_yscale("symlog", linthresh=0.01)
    ax.legend(frameon=False)
    return _save(fig, path)


def phi_theta_plot(angles, iid, kind, path, delta_max=3 * math.pi / 16):
    sel = [a for a in angles if a["instance_id"] == iid and a["kind"] == kind and float(a["delta"]) < math.pi / 4]
    fig, ax = plt.subplots()
    cmap = plt.get_cmap("coolwarm")
    for di, recs in sorted(_grouped(sel, lambda a: int(a["delta_index"])).items()):
        d = float(recs[0]["delta"])
        ax.scatter(
            [math.degrees(float(a["theta1"])) for a in recs],
            [math.degrees(float(a["mean_phi"])) for a in recs],
            s=10,
            color=cmap(d / (math.pi / 4)),
            marker="o" if d <= delta_max + 1e-12 else "x",
            label=f"{math.degrees(d):.1f}",
        )
    ax.set_xlabel("opening angle theta1 (deg)")
    ax.set_ylabel("mean final angle (deg)")
    ax.set_title(f"{iid}, {kind}; o: delta <= 3pi/16")
    ax.legend(title="delta (deg)", ncol=2, frameon=False, fontsize=6)
    return _save(fig, path)


def indicator_sweep_plot(indicators, iid, kind, path):
    sel = [r for r in indicators if r["instance_id"] == iid and r["scalarizer"] == kind and r["eps_policy"] == "uniform"]
    by_eps = _grouped(sel, lambda r: float(r["eps"]))
    eps = sorted(by_eps)
    fig, (a1, a2) = plt.subplots(1, 2, figsize=(7.0, 3.0))
    a1.boxplot([[float(r["hv_diff"]) for r in by_eps[e]] for e in eps], tick_labels=[f"{e:g}" for e in eps])
    a2.boxplot([[float(r["eps_ind"]) for r in by_eps[e]] for e in eps], tick_labels=[f"{e:g}" for e in eps])
    a1.set_ylabel("hypervolume difference")
    a2.set_ylabel("multiplicative epsilon")
    for ax in (a1, a2):
        ax.set_xlabel("uniform eps")
        ax.tick_params(axis="x", rotation=90)
    fig.suptitle(f"{iid}, {kind}")
    return _save(fig, path)


def dynamics_plot(dump_path: Path, path: Path):
    recs = store.read_csv(dump_path)
    sec = _grouped(recs, lambda r: r["section"])
    fig, ax = plt.subplots(figsize=(4.0, 4.0))
    front = sorted((_f(r, "z1", "z2") for r in sec["front"]), key=lambda z: z[0])
    if front:
        ax.plot(*zip(*front), "k.", ms=2, label="best-known front")
    gens = sorted({int(r["generation"]) for r in sec["offspring"]})
    cmap = plt.get_cmap("plasma")
    for i, g in enumerate(gens):
        col = cmap(i / max(len(gens) - 1, 1))
        kids = [_f(r, "z1", "z2") for r in sec["offspring"] if int(r["generation"]) == g]
        ax.scatter(*zip(*kids), s=4, color=col, alpha=0.5, label=f"offspring g={g}")
        iso = [_f(r, "z1", "z2") for r in sec["iso"] if int(r["generation"]) == g]
        ax.plot(*zip(*iso), color=col, lw=0.8)
    path_z = [_f(r, "z1", "z2") for r in sec["parent"]]
    ax.plot(*zip(*path_z), "g-", lw=1.2, label="parent")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.set_aspect("equal")
    ax.set_xlabel("f1")
    ax.set_ylabel("f2")
    ax.set_title(dump_path.stem, fontsize=8)
    ax.legend(frameon=False, fontsize=6, loc="lower left")
    return _save(fig, path)


def render_all(out_dir: str | Path, rows=None, dynamics=()) -> list[Path]:
    out = Path(out_dir)
    adir = out / "analysis"
    fdir = out / "figures"
    angles = store.read_csv(adir / "angles.csv")
    devs = store.read_csv(adir / "deviation.csv")
    stars = store.read_csv(adir / "eps_star.csv")
    inds = store.read_csv(adir / "indicators.csv")
    made = []
    with plt.rc_context(RC):
        for iid, kind in sorted({(a["instance_id"], a["kind"]) for a in angles}):
            made.append(final_angle_plot(angles, iid, kind, fdir / f"final_angle_{iid}_{kind}.png"))
            made.append(deviation_plot(devs, iid, kind, fdir / f"deviation_{iid}_{kind}.png"))
            made.append(phi_theta_plot(angles, iid, kind, fdir / f"phi_theta_{iid}_{kind}.png"))
            made.append(indicator_sweep_plot(inds, iid, kind, fdir / f"indicators_{iid}_{kind}.png"))
        for kind in sorted({s["kind"] for s in stars}):
            made.append(eps_star_plot(stars, kind, fdir / f"eps_star_{kind}.png"))
        for p in dynamics:
            p = Path(p)
            made.append(dynamics_plot(p, fdir / f"dynamics_{p.stem}.png"))
    return made
