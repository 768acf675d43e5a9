"""Campaign execution.

Cells are independent work items. Whatever the worker count, completed
cells are appended to the results store in canonical cell order, so the
store is byte-identical across schedules and a partially written store is
always a prefix of the complete one.
"""

from __future__ import annotations

import json
import logging
import multiprocessing as mp
from dataclasses import asdict
from pathlib import Path

from ..evolve import run_batch
from ..landscape import Instance, generate_instance, save_instance
from ..scalarize import make_config
from . import store
from .campaign import Campaign, run_seed

log = logging.getLogger(__name__)

_worker_state: dict = {}


def instance_id(rho_index: int) -> str:
    return f"rho{rho_index:02d}"


def run_id(rho_index: int, kind: str, delta_index: int, eps_index: int, run: int) -> str:
    return f"{instance_id(rho_index)}-{kind}-d{delta_index:03d}-e{eps_index:03d}-r{run:02d}"


def build_instances(c: Campaign) -> dict[str, Instance]:
    return {instance_id(i): generate_instance(c.instance_params(i)) for i in range(len(c.rhos))}


def run_cell(c: Campaign, inst: Instance, cell, dump_offspring: bool = False):
    """Execute every run of one grid cell; returns (result rows, trajectory rows, offspring rows)."""
    ri, kind, di, ei = cell
    delta, eps = c.deltas[di], c.eps_grids[kind][ei]
    cfg = make_config(kind, delta, eps, c.zbar)
    seeds = [run_seed(c.master_seed, ri, kind, di, ei, r) for r in range(c.runs)]
    records = run_batch(inst, cfg, [c.ea_params(s) for s in seeds], dump_offspring=dump_offspring)
    results, traj, kids = [], [], []
    for r, (seed, rec) in enumerate(zip(seeds, records)):
        rid = run_id(ri, kind, di, ei, r)
        row = store.RunRow(
            run_id=rid,
            instance_id=instance_id(ri),
            rho=float(c.rhos[ri]),
            kind=kind,
            delta_index=di,
            delta=delta,
            eps_index=ei,
            eps=eps,
            run=r,
            seed=seed,
            z1=rec.final_z[0],
            z2=rec.final_z[1],
            value=rec.final_value,
            bits="".join("1" if b else "0" for b in rec.final_bits),
        )
        results.append(row.to_fields())
        for g, (v, z) in enumerate(zip(rec.values, rec.parents)):
            traj.append((rid, g, float(v), float(z[0]), float(z[1])))
        if rec.offspring is not None:
            for g, cloud in enumerate(rec.offspring, 1):
                for i, z in enumerate(cloud):
                    kids.append((rid, g, i, float(z[0]), float(z[1])))
    return results, traj, kids


def _init_worker(c: Campaign, instances: dict[str, Instance], dump_offspring: bool) -> None:
    _worker_state.update(campaign=c, instances=instances, dump=dump_offspring)


def _work(cell):
    c = _worker_state["campaign"]
    inst = _worker_state["instances"][instance_id(cell[0])]
    return run_cell(c, inst, cell, _worker_state["dump"])


def _manifest(c: Campaign, instances: dict[str, Instance]) -> dict:
    return {
        "schema": "scalarmo-manifest/1",
        "campaign": asdict(c),
        "deltas": c.deltas,
        "instances": {
            iid: {"n": i.params.n, "k": i.params.k, "rho": i.params.rho, "seed": i.params.seed}
            for iid, i in instances.items()
        },
        "total_runs": c.n_runs_total(),
    }


def _completed_cells(out: Path, c: Campaign) -> set:
    """Cells whose runs are all present; truncates the store to exactly those cells."""
    rows = store.load_results(out)
    if not rows:
        return set()
    by_cell: dict = {}
    for r in rows:
        by_cell.setdefault(r.cell, []).append(r)
    done = {cell for cell, rs in by_cell.items() if len(rs) == c.runs}
    if len(done) * c.runs != len(rows):
        keep = {r.run_id for r in rows if r.cell in done}
        _truncate(out, keep)
    return done


def _truncate(out: Path, keep: set[str]) -> None:
    for name in (store.RESULTS, store.TRAJECTORIES, store.OFFSPRING):
        path = out / name
        if not path.exists():
            continue
        lines = path.read_text().splitlines(keepends=True)
        kept = [lines[0]] + [ln for ln in lines[1:] if ln.split(",", 1)[0] in keep]
        path.write_text("".join(kept))


def run_campaign(c: Campaign, out_dir: str | Path, workers: int = 1, dump_offspring: bool = False) -> Path:
    """Run all missing cells of ``c`` into ``out_dir``; completed cells are skipped."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    campaign_text = c.to_text()
    existing = out / store.CAMPAIGN
    if existing.exists() and existing.read_text() != campaign_text:
        raise ValueError(f"{out} holds results of a different campaign")

    instances = build_instances(c)
    (out / store.INSTANCE_DIR).mkdir(exist_ok=True)
    for iid, inst in instances.items():
        save_instance(inst, out / store.INSTANCE_DIR / f"{iid}.rmnk")
    existing.write_text(campaign_text)
    (out / store.MANIFEST).write_text(json.dumps(_manifest(c, instances), indent=2, sort_keys=True) + "\n")

    done = _completed_cells(out, c)
    todo = [cell for cell in c.cells() if (instance_id(cell[0]), cell[1], cell[2], cell[3]) not in done]
    log.info("%d cells to run (%d already complete)", len(todo), len(done))

    files = {
        store.RESULTS: store.RESULT_FIELDS,
        store.TRAJECTORIES: store.TRAJECTORY_FIELDS,
    }
    if dump_offspring:
        files[store.OFFSPRING] = store.OFFSPRING_FIELDS
    handles = {}
    for name, header in files.items():
        path = out / name
        fresh = not path.exists() or path.stat().st_size == 0
        handles[name] = open(path, "a", newline="")
        if fresh:
            handles[name].write(store.csv_text(header, []))

    try:
        if workers <= 1:
            _init_worker(c, instances, dump_offspring)
            outputs = map(_work, todo)
            pool = None
        else:
            pool = mp.get_context("spawn").Pool(workers, _init_worker, (c, instances, dump_offspring))
            outputs = pool.imap(_work, todo, chunksize=4)
        for results, traj, kids in outputs:
            handles[store.RESULTS].write(store.csv_text(None, results))
            handles[store.TRAJECTORIES].write(store.csv_text(None, traj))
            if dump_offspring:
                handles[store.OFFSPRING].write(store.csv_text(None, kids))
            for fh in handles.values():
                fh.flush()
        if pool is not None:
            pool.close()
            pool.join()
    finally:
        for fh in handles.values():
            fh.close()
    return out

