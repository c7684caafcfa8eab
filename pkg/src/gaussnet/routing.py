"""Greedy adaptive routing.

At every hop the packet moves to the non-faulty, unvisited neighbour closest
to the destination under the squared Euclidean metric on centered
coordinates.  Visited nodes are never re-entered, so the router cannot
backtrack out of a dead end: when no candidate remains the packet is dropped
where it stands.  That local-minimum failure mode is the behaviour under
study, not a bug to patch.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .gaussian import Topology, euclid_dist2

__all__ = ["RouteStatus", "RouteResult", "route_greedy", "MAX_HOPS_FACTOR"]

#: Hop budget = factor * node count, shared by both routing policies.
MAX_HOPS_FACTOR = 2


class RouteStatus(enum.Enum):
    SUCCESS = "success"
    STUCK = "stuck"
    MAX_HOPS_EXCEEDED = "max_hops_exceeded"


@dataclass(frozen=True)
class RouteResult:
    path: tuple[int, ...]
    status: RouteStatus
    hops: int  # -1 on any failure

    @property
    def delivered(self) -> bool:
        return self.status is RouteStatus.SUCCESS


def route_greedy(
    t: Topology,
    src: int,
    dst: int,
    faults=None,
    distance_mode: str = "plain",
) -> RouteResult:
    """Deterministic greedy route; ties broken toward the smallest node index."""
    blocked = frozenset() if faults is None else frozenset(getattr(faults, "nodes", faults))
    if src in blocked or dst in blocked:
        raise ValueError("greedy routing endpoints must not be faulty")

    path = [src]
    current = src
    visited = {src}
    max_hops = MAX_HOPS_FACTOR * t.n_nodes
    hops = 0
    while current != dst and hops < max_hops:
        candidates = [
            int(v) for v in t.adjacency[current]
            if int(v) not in blocked and int(v) not in visited
        ]
        if not candidates:
            return RouteResult(tuple(path), RouteStatus.STUCK, -1)
        current = min(
            candidates,
            key=lambda v: (euclid_dist2(v, dst, t, distance_mode), v),
        )
        path.append(current)
        visited.add(current)
        hops += 1

    if current == dst:
        return RouteResult(tuple(path), RouteStatus.SUCCESS, hops)
    return RouteResult(tuple(path), RouteStatus.MAX_HOPS_EXCEEDED, -1)
