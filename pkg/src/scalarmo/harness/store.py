"""Plain-text results store: run table, trajectory sidecar, manifest, instances."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

from ..landscape import Instance, load_instance

RESULTS = "results.csv"
TRAJECTORIES = "trajectories.csv"
OFFSPRING = "offspring.csv"
MANIFEST = "manifest.json"
CAMPAIGN = "campaign.txt"
INSTANCE_DIR = "instances"

RESULT_FIELDS = [
    "run_id",
    "instance_id",
    "rho",
    "kind",
    "delta_index",
    "delta",
    "eps_index",
    "eps",
    "run",
    "seed",
    "z1",
    "z2",
    "value",
    "bits",
]
TRAJECTORY_FIELDS = ["run_id", "generation", "value", "z1", "z2"]
OFFSPRING_FIELDS = ["run_id", "generation", "child", "z1", "z2"]


@dataclass(frozen=True)
class RunRow:
    """One EA run as stored in the results table."""

    run_id: str
    instance_id: str
    rho: float
    kind: str
    delta_index: int
    delta: float
    eps_index: int
    eps: float
    run: int
    seed: int
    z1: float
    z2: float
    value: float
    bits: str

    @property
    def z(self) -> tuple[float, float]:
        return (self.z1, self.z2)

    @property
    def cell(self) -> tuple[str, str, int, int]:
        return (self.instance_id, self.kind, self.delta_index, self.eps_index)

    def to_fields(self) -> list[str]:
        out = []
        for name in RESULT_FIELDS:
            v = getattr(self, name)
            out.append(repr(v) if isinstance(v, float) else str(v))
        return out

    @classmethod
    def from_fields(cls, rec: dict[str, str]) -> RunRow:
        return cls(
            run_id=rec["run_id"],
            instance_id=rec["instance_id"],
            rho=float(rec["rho"]),
            kind=rec["kind"],
            delta_index=int(rec["delta_index"]),
            delta=float(rec["delta"]),
            eps_index=int(rec["eps_index"]),
            eps=float(rec["eps"]),
            run=int(rec["run"]),
            seed=int(rec["seed"]),
            z1=float(rec["z1"]),
            z2=float(rec["z2"]),
            value=float(rec["value"]),
            bits=rec["bits"],
        )


def csv_text(header: list[str] | None, rows) -> str:
    """CSV with LF line endings and floats in round-trip repr; header optional."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header is not None:
        w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(csv_text(header, rows))


def read_csv(path: Path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def load_results(out_dir: str | Path) -> list[RunRow]:
    path = Path(out_dir) / RESULTS
    if not path.exists():
        return []
    return [RunRow.from_fields(rec) for rec in read_csv(path)]


def load_trajectory(out_dir: str | Path, run_id: str) -> list[tuple[int, float, float, float]]:
    out = []
    for rec in read_csv(Path(out_dir) / TRAJECTORIES):
        if rec["run_id"] == run_id:
            out.append((int(rec["generation"]), float(rec["value"]), float(rec["z1"]), float(rec["z2"])))
    return out


def load_manifest(out_dir: str | Path) -> dict:
    path = Path(out_dir) / MANIFEST
    return json.loads(path.read_text()) if path.exists() else {}


def load_instances(out_dir: str | Path) -> dict[str, Instance]:
    inst_dir = Path(out_dir) / INSTANCE_DIR
    if not inst_dir.exists():
        return {}
    return {p.stem: load_instance(p) for p in sorted(inst_dir.glob("*.rmnk"))}
