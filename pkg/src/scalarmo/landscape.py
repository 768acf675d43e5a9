"""Bi-objective rho-MNK landscapes with correlated component tables.

Each objective is the average of ``n`` component functions. Component ``j``
reads bit ``j`` and ``k`` linked bits; both objectives share the same links.
Table rows are drawn jointly for the two objectives from a Gaussian copula
so that the component values are uniform on [0, 1] with Pearson correlation
``rho``.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAGIC = b"RMNK1"

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class InstanceParams:
    n: int
    k: int
    rho: float
    seed: int
    m: int = 2

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.k <= self.n - 1:
            raise ValueError(f"k must be in [0, n-1], got k={self.k}, n={self.n}")
        if self.m != 2:
            raise ValueError("only two objectives are supported")
        if not -1.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in the open interval (-1, 1), got {self.rho}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True, eq=False)
class Instance:
    """An immutable rho-MNK landscape.

    ``links`` has shape (n, k); ``tables`` has shape (2, n, 2**(k+1)).
    """

    params: InstanceParams
    links: np.ndarray
    tables: np.ndarray
    _flat: np.ndarray = field(init=False, repr=False)
    _offsets: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n, k = self.params.n, self.params.k
        links = np.asarray(self.links, dtype=np.int64).reshape(n, k)
        tables = np.asarray(self.tables, dtype=np.float64)
        if tables.shape != (2, n, 2 ** (k + 1)):
            raise ValueError(f"tables must have shape (2, {n}, {2 ** (k + 1)}), got {tables.shape}")
        for j, row in enumerate(links):
            if len(set(row.tolist())) != k or j in row or (row < 0).any() or (row >= n).any():
                raise ValueError(f"invalid link list for position {j}: {row.tolist()}")
        if (tables < 0).any() or (tables > 1).any():
            raise ValueError("table entries must lie in [0, 1]")
        links.setflags(write=False)
        tables.setflags(write=False)
        object.__setattr__(self, "links", links)
        object.__setattr__(self, "tables", tables)
        object.__setattr__(self, "_flat", tables.reshape(2, -1))
        object.__setattr__(self, "_offsets", np.arange(n, dtype=np.int32) * 2 ** (k + 1))

    @property
    def n(self) -> int:
        return self.params.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.params == other.params
            and np.array_equal(self.links, other.links)
            and np.array_equal(self.tables, other.tables)
        )

    def row_indices(self, bits: np.ndarray) -> np.ndarray:
        """Table row of every component for a batch of bit-strings (..., n).

        The owner bit is the most significant bit of the row index, followed
        by the linked bits in link order.
        """
        bits = np.asarray(bits).astype(np.int32)
        k = self.params.k
        idx = bits << k
        for i in range(k):
            idx |= bits[..., self.links[:, i]] << (k - 1 - i)
        return idx

    def evaluate_many(self, bits: np.ndarray) -> np.ndarray:
        """Objective vectors for a batch of bit-strings; returns shape (..., 2)."""
        bits = np.asarray(bits)
        if bits.shape[-1] != self.n:
            raise ValueError(f"bit-string length {bits.shape[-1]} does not match n={self.n}")
        flat = self.row_indices(bits) + self._offsets
        f1 = self._flat[0].take(flat).mean(axis=-1)
        f2 = self._flat[1].take(flat).mean(axis=-1)
        return np.stack([f1, f2], axis=-1)


def normal_cdf(x):
    """Standard normal CDF via erf (accurate to ~1e-15)."""
    x = np.asarray(x, dtype=np.float64)
    return 0.5 * (1.0 + np.vectorize(math.erf, otypes=[np.float64])(x / _SQRT2))


def copula_normal_correlation(rho: float) -> float:
    """Normal correlation whose Gaussian copula has uniform-marginal Pearson correlation rho."""
    return 2.0 * math.sin(math.pi * rho / 6.0)


def correlated_uniform_pairs(size: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    """Draw ``size`` pairs with uniform [0,1] marginals and Pearson correlation rho."""
    r = copula_normal_correlation(rho)
    g1 = rng.standard_normal(size)
    g2 = r * g1 + math.sqrt(max(0.0, 1.0 - r * r)) * rng.standard_normal(size)
    return np.stack([normal_cdf(g1), normal_cdf(g2)])


def generate_instance(params: InstanceParams) -> Instance:
    n, k = params.n, params.k
    rng = np.random.default_rng(params.seed)
    links = np.empty((n, k), dtype=np.int64)
    for j in range(n):
        others = np.delete(np.arange(n), j)
        links[j] = rng.choice(others, size=k, replace=False)
    pairs = correlated_uniform_pairs(n * 2 ** (k + 1), params.rho, rng)
    tables = pairs.reshape(2, n, 2 ** (k + 1))
    return Instance(params=params, links=links, tables=tables)


def evaluate(inst: Instance, bits) -> tuple[float, float]:
    """Objective vector (z1, z2) of a single bit-string."""
    bits = np.asarray(bits)
    if bits.ndim != 1:
        raise ValueError("evaluate expects a single bit vector")
    z = inst.evaluate_many(bits)
    return float(z[0]), float(z[1])


def empirical_correlation(inst: Instance, samples: int, seed: int) -> float:
    """Pearson correlation of (f1, f2) over uniformly random bit-strings."""
    if samples < 2:
        raise ValueError("need at least two samples")
    rng = np.random.default_rng(seed)
    bits = rng.random((samples, inst.n)) < 0.5
    z = inst.evaluate_many(bits)
    sd = z.std(axis=0)
    if (sd == 0).any():
        raise ValueError("zero variance in an objective; correlation undefined")
    return float(np.corrcoef(z[:, 0], z[:, 1])[0, 1])


def constant_instance(n: int, k: int, value: float = 1.0) -> Instance:
    """Instance whose tables are all ``value``; handy for flat-landscape checks."""
    params = InstanceParams(n=n, k=k, rho=0.0, seed=0)
    links = np.array([[(j + 1 + i) % n for i in range(k)] for j in range(n)], dtype=np.int64).reshape(n, k)
    tables = np.full((2, n, 2 ** (k + 1)), float(value))
    return Instance(params=params, links=links, tables=tables)


# -- serialization ---------------------------------------------------------


def _header(params: InstanceParams) -> bytes:
    return f"n={params.n} k={params.k} m={params.m} rho={params.rho!r} seed={params.seed}\n".encode()


def dumps_instance(inst: Instance) -> bytes:
    buf = io.BytesIO()
    buf.write(MAGIC + b"\n")
    buf.write(_header(inst.params))
    buf.write(inst.links.astype("<i8").tobytes())
    buf.write(inst.tables.astype("<f8").tobytes())
    return buf.getvalue()


def loads_instance(data: bytes) -> Instance:
    if not data.startswith(MAGIC + b"\n"):
        raise ValueError("not an RMNK1 instance file")
    rest = data[len(MAGIC) + 1 :]
    line, _, payload = rest.partition(b"\n")
    fields = dict(item.split("=", 1) for item in line.decode().split())
    params = InstanceParams(
        n=int(fields["n"]), k=int(fields["k"]), m=int(fields["m"]), rho=float(fields["rho"]), seed=int(fields["seed"])
    )
    n, k = params.n, params.k
    n_link = n * k * 8
    n_tab = 2 * n * 2 ** (k + 1) * 8
    if len(payload) != n_link + n_tab:
        raise ValueError(f"payload size {len(payload)} does not match header (expected {n_link + n_tab})")
    links = np.frombuffer(payload[:n_link], dtype="<i8").reshape(n, k).astype(np.int64)
    tables = np.frombuffer(payload[n_link:], dtype="<f8").reshape(2, n, 2 ** (k + 1)).astype(np.float64)
    return Instance(params=params, links=links, tables=tables)


def save_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_bytes(dumps_instance(inst))


def load_instance(path: str | Path) -> Instance:
    return loads_instance(Path(path).read_bytes())


def instance_to_csv(inst: Instance) -> str:
    """Text dump: one row per (objective, position, table row) plus the links."""
    lines = ["section,objective,position,index,value"]
    for j in range(inst.n):
        for i, l in enumerate(inst.links[j]):
            lines.append(f"link,,{j},{i},{int(l)}")
    for obj in range(2):
        for j in range(inst.n):
            for r, v in enumerate(inst.tables[obj, j]):
                lines.append(f"table,{obj + 1},{j},{r},{float(v)!r}")
    return "\n".join(lines) + "\n"

