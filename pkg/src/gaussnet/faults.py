"""Reproducible node-fault generation.

Two generators: ``uniform`` picks the failed nodes uniformly without
replacement; ``clustered`` grows failures around uniformly chosen seed nodes
with weight exp(-d^2 / (2 sigma^2)), d being the fault-free BFS hop distance
to the nearest seed, so clusters follow the wrap-around topology rather than
the coordinate chart.

Fault sets are static: generated once per trial and never mutated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .gaussian import Topology, bfs_distances_from

__all__ = ["FaultMode", "FaultSpec", "FaultSet", "fault_count", "inject_uniform",
           "inject_clustered", "generate_faults", "fault_set_to_csv", "fault_set_nodes_from_csv"]

UNIFORM = "uniform"
CLUSTERED = "clustered"
FaultMode = str


@dataclass(frozen=True)
class FaultSpec:
    mode: FaultMode = UNIFORM
    density: float = 0.0
    seed: int = 0
    cluster_sigma: float = 1.0   # lattice-hop units, clustered mode only
    num_clusters: int = 1        # clustered mode only

    def __post_init__(self) -> None:
        if not 0.0 <= self.density <= 0.5:
            raise ValueError(f"fault density {self.density} outside [0, 0.5]")
        if self.mode not in (UNIFORM, CLUSTERED):
            raise ValueError(f"unknown fault mode {self.mode!r}")
        if self.mode == CLUSTERED:
            if self.cluster_sigma <= 0:
                raise ValueError("cluster_sigma must be positive")
            if self.num_clusters < 1:
                raise ValueError("num_clusters must be positive")


@dataclass(frozen=True)
class FaultSet:
    """Failed node indices plus the spec that generated them.

    ``cluster_seeds`` records the seed nodes of clustered generation (empty
    for uniform mode); kept for provenance and statistical tests.
    """

    nodes: frozenset[int]
    spec: FaultSpec
    cluster_seeds: tuple[int, ...] = field(default=())

    def __contains__(self, node: int) -> bool:
        return node in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.nodes))


def fault_count(density: float, n_nodes: int) -> int:
    """floor(density * N); the epsilon guards against a/N * N rounding below a."""
    return int(math.floor(density * n_nodes + 1e-9))


def _eligible(t: Topology, excluded: Iterable[int]) -> list[int]:
    banned = set(int(v) for v in excluded)
    return [c for c in range(t.n_nodes) if c not in banned]


def _check_feasible(count: int, n_eligible: int) -> None:
    if count > n_eligible:
        raise ValueError(f"cannot place {count} faults among {n_eligible} eligible nodes")


def inject_uniform(t: Topology, spec: FaultSpec, excluded: Iterable[int] = ()) -> FaultSet:
    """Exactly floor(density*N) distinct faults, uniform over non-excluded nodes."""
    count = fault_count(spec.density, t.n_nodes)
    pool = _eligible(t, excluded)
    _check_feasible(count, len(pool))
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    chosen = rng.choice(len(pool), size=count, replace=False) if count else []
    return FaultSet(nodes=frozenset(pool[int(i)] for i in chosen), spec=spec)


def inject_clustered(t: Topology, spec: FaultSpec, excluded: Iterable[int] = ()) -> FaultSet:
    """Seed nodes uniform; remaining faults weighted by a Gaussian kernel.

    The kernel distance is BFS hop distance on the fault-free graph from the
    nearest seed.  Weights are normalised from log space so tiny sigmas do
    not underflow to an all-zero distribution.
    """
    count = fault_count(spec.density, t.n_nodes)
    pool = _eligible(t, excluded)
    _check_feasible(count, len(pool))
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    if count == 0:
        return FaultSet(nodes=frozenset(), spec=spec)

    n_seeds = min(spec.num_clusters, count)
    seed_pos = rng.choice(len(pool), size=n_seeds, replace=False)
    seeds = [pool[int(i)] for i in seed_pos]
    chosen = set(seeds)

    dist_rows = np.stack([bfs_distances_from(t, s) for s in seeds])
    nearest = dist_rows.min(axis=0).astype(np.float64)  # graph is connected: all >= 0

    log_w = -(nearest**2) / (2.0 * spec.cluster_sigma**2)
    remaining = [c for c in pool if c not in chosen]
    for _ in range(count - n_seeds):
        lw = np.array([log_w[c] for c in remaining])
        w = np.exp(lw - lw.max())
        w /= w.sum()
        pick = int(rng.choice(len(remaining), p=w))
        chosen.add(remaining.pop(pick))

    return FaultSet(nodes=frozenset(chosen), spec=spec, cluster_seeds=tuple(sorted(seeds)))


def generate_faults(t: Topology, spec: FaultSpec, excluded: Iterable[int] = ()) -> FaultSet:
    if spec.mode == CLUSTERED:
        return inject_clustered(t, spec, excluded)
    return inject_uniform(t, spec, excluded)


def fault_set_to_csv(fs: FaultSet) -> str:
    spec = fs.spec
    header = (
        f"# fault-set mode={spec.mode} density={spec.density:.6g} seed={spec.seed}"
        f" cluster_sigma={spec.cluster_sigma:.6g} num_clusters={spec.num_clusters}"
    )
    lines = [header, "node_index"]
    lines += [str(c) for c in sorted(fs.nodes)]
    return "\n".join(lines) + "\n"


def fault_set_nodes_from_csv(text: str) -> frozenset[int]:
    nodes = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line == "node_index":
            continue
        nodes.append(int(line))
    return frozenset(nodes)
