"""Gaussian interconnection network routing simulator.

Builds degree-4 networks over the Gaussian integers modulo alpha, injects
node faults, and compares greedy adaptive routing against a PPO-trained
policy on delivery ratio, adaptive score, hop counts and throughput.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .gaussian import (
    DIRECTIONS,
    GaussianInt,
    NetworkModulus,
    Quadrant,
    Topology,
    bfs_distance,
    build_topology,
    canonical_residue,
    euclid_dist2,
    node_index,
    quadrant_of,
)
from .faults import FaultSet, FaultSpec, generate_faults, inject_clustered, inject_uniform
from .routing import RouteResult, RouteStatus, route_greedy
from .env import RoutingEnv, StepOutcome
from .ppo import (
    PPOConfig,
    PolicyParams,
    TrainingReport,
    Transition,
    compute_gae,
    load_params,
    policy_forward,
    ppo_update,
    route_rl,
    save_params,
    train,
)

__version__ = "0.1.0"
