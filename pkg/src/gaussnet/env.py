"""Single-packet routing environment.

States are nodes; the four actions are the unit moves +i, -i, +1, -1 (all
always legal on the torus).  Rewards: +100 on reaching the destination, -50
on stepping into a faulty node (the episode ends there and the packet is
lost; the agent does not relocate), -1 per ordinary hop.  Episodes truncate
after 2N steps, the same hop budget the greedy router gets.

Observations are 8 floats: centered coordinates of the current node and of
the destination (each divided by the topology's coordinate scale, so they
lie in [-1, 1]) followed by one faulty/healthy flag per directional
neighbour.  Destination coordinates and fault flags are not part of the bare
node state the MDP formulation starts from; they are required for a single
policy to serve varying destinations and regenerated fault sets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import Topology

__all__ = ["OBS_DIM", "N_ACTIONS", "StepOutcome", "RoutingEnv", "build_observation"]

OBS_DIM = 8
N_ACTIONS = 4  # action j moves along DIRECTIONS[j]: 0=+i N, 1=-i S, 2=+1 E, 3=-1 W


@dataclass(frozen=True)
class StepOutcome:
    observation: np.ndarray
    reward: float
    terminated: bool
    truncated: bool
    reached_dst: bool
    hit_fault: bool


def build_observation(t: Topology, current: int, dst: int, fault_lookup) -> np.ndarray:
    obs = np.empty(OBS_DIM, dtype=np.float64)
    scale = float(t.coord_scale)
    obs[0:2] = t.centered_coords[current] / scale
    obs[2:4] = t.centered_coords[dst] / scale
    for j in range(N_ACTIONS):
        obs[4 + j] = 1.0 if int(t.adjacency[current, j]) in fault_lookup else 0.0
    return obs


class RoutingEnv:
    """One packet's episode; reset() then step() until terminated/truncated."""

    def __init__(self, topology: Topology):
        self.topology = topology
        self.max_steps = 2 * topology.n_nodes
        self.current: int = -1
        self.dst: int = -1
        self.faults: frozenset[int] = frozenset()
        self.steps_taken = 0
        self._active = False

    def reset(self, src: int, dst: int, faults=None) -> np.ndarray:
        blocked = frozenset() if faults is None else frozenset(getattr(faults, "nodes", faults))
        if src == dst:
            raise ValueError("src and dst must differ")
        if src in blocked or dst in blocked:
            raise ValueError("episode endpoints must not be faulty")
        self.current = src
        self.dst = dst
        self.faults = blocked
        self.steps_taken = 0
        self._active = True
        return build_observation(self.topology, src, dst, blocked)

    def step(self, action: int) -> StepOutcome:
        if not self._active:
            raise RuntimeError("step() on a finished episode")
        nxt = int(self.topology.adjacency[self.current, action])
        self.steps_taken += 1

        if nxt == self.dst:
            self.current = nxt
            self._active = False
            return StepOutcome(self._obs(), 100.0, True, False, True, False)
        if nxt in self.faults:
            # packet lost in place: position (and observation) do not advance
            self._active = False
            return StepOutcome(self._obs(), -50.0, True, False, False, True)

        self.current = nxt
        truncated = self.steps_taken >= self.max_steps
        if truncated:
            self._active = False
        return StepOutcome(self._obs(), -1.0, False, truncated, False, False)

    def _obs(self) -> np.ndarray:
        return build_observation(self.topology, self.current, self.dst, self.faults)
