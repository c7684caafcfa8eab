"""Actor-critic PPO, written against the kernel backend (no autograd).

The actor maps the 8-feature observation through two tanh layers of 64 units
to 4 action logits; the critic has the same trunk shape with a scalar head.
Updates maximise the clipped surrogate objective with generalized advantage
estimation, minimise the value MSE and add an entropy bonus; gradients are
exact backpropagation and are checked against finite differences in the test
suite.  Inference (route_rl) is deterministic argmax so that evaluation
variance comes only from fault sets and endpoint choices.
"""

from __future__ import annotations

import base64
import json
import time
from dataclasses import dataclass, field, asdict, replace
from typing import Callable, Sequence

import numpy as np

from . import _kernels as K
from .env import OBS_DIM, N_ACTIONS, RoutingEnv
from .faults import FaultSet, FaultSpec, generate_faults
from .gaussian import GaussianInt, NetworkModulus, Topology
from .routing import MAX_HOPS_FACTOR, RouteResult, RouteStatus
from .seeding import derive_seed, rng_for

__all__ = [
    "NumericalError", "EpsilonGreedy", "PPOConfig", "PolicyParams", "Transition",
    "TrainingReport", "policy_forward", "value_forward", "compute_gae", "ppo_update",
    "train", "route_rl", "save_params", "load_params", "default_sampler", "moving_average",
]

HIDDEN = 64
PARAMS_FORMAT = "gaussnet-policy"
PARAMS_FORMAT_VERSION = 1


class NumericalError(RuntimeError):
    """Raised when a forward pass or update produces non-finite numbers."""


@dataclass(frozen=True)
class EpsilonGreedy:
    """Optional random-action overlay on top of the stochastic policy."""

    enabled: bool = False
    start: float = 1.0
    decay: float = 0.995
    floor: float = 0.05


@dataclass(frozen=True)
class PPOConfig:
    gamma: float = 0.95
    gae_lambda: float = 0.92
    clip_epsilon: float = 0.2
    episodes: int = 500
    episodes_per_update: int = 10
    update_epochs: int = 4
    minibatch_size: int = 64
    # 3e-4 is the usual PPO default but demonstrably under-trains in 500
    # episodes on these tiny networks; 1e-3 converges inside the budget
    learning_rate: float = 1e-3
    entropy_coef: float = 0.01
    value_coef: float = 0.5
    epsilon_greedy: EpsilonGreedy = field(default_factory=EpsilonGreedy)
    fault_refresh_every: int = 50  # episodes between fault-set resamples in training
    # optional linear schedules (None = constant); annealing entropy to zero
    # sharpens the final policy, which matters because inference is argmax
    learning_rate_final: float | None = None
    entropy_coef_final: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.gamma <= 1.0 or not 0.0 < self.gae_lambda <= 1.0:
            raise ValueError("gamma and gae_lambda must lie in (0, 1]")
        if not 0.0 < self.clip_epsilon < 1.0:
            raise ValueError("clip_epsilon must lie in (0, 1)")
        if self.episodes < 0:
            raise ValueError("episodes must be non-negative")


@dataclass(frozen=True)
class Transition:
    observation: np.ndarray
    action: int
    log_prob: float
    reward: float
    value_estimate: float
    terminal_flag: bool


@dataclass
class PolicyParams:
    """Weights of both networks: [(w1, b1), (w2, b2), (w3, b3)] each."""

    actor: list[tuple[np.ndarray, np.ndarray]]
    critic: list[tuple[np.ndarray, np.ndarray]]

    @classmethod
    def initialize(cls, rng: np.random.Generator) -> PolicyParams:
        def layer(fan_in: int, fan_out: int, scale: float = 1.0):
            w = rng.normal(0.0, scale / np.sqrt(fan_in), size=(fan_out, fan_in))
            return np.ascontiguousarray(w), np.zeros(fan_out)

        actor = [layer(OBS_DIM, HIDDEN), layer(HIDDEN, HIDDEN), layer(HIDDEN, N_ACTIONS, 0.01)]
        critic = [layer(OBS_DIM, HIDDEN), layer(HIDDEN, HIDDEN), layer(HIDDEN, 1)]
        return cls(actor=actor, critic=critic)

    def copy(self) -> PolicyParams:
        return PolicyParams(
            actor=[(w.copy(), b.copy()) for w, b in self.actor],
            critic=[(w.copy(), b.copy()) for w, b in self.critic],
        )

    def all_finite(self) -> bool:
        return all(
            np.isfinite(w).all() and np.isfinite(b).all()
            for w, b in self.actor + self.critic
        )


@dataclass
class TrainingReport:
    episode_returns: np.ndarray
    smoothed_returns: np.ndarray  # 20-episode trailing moving average
    params: PolicyParams
    wall_seconds: float


def _net_forward(layers, x: np.ndarray):
    (w1, b1), (w2, b2), (w3, b3) = layers
    return K.mlp3_forward(w1, b1, w2, b2, w3, b3, x)


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def policy_forward(params: PolicyParams, obs: np.ndarray) -> np.ndarray:
    """Action probabilities for one observation (strictly positive, sum 1)."""
    _, _, logits = _net_forward(params.actor, np.atleast_2d(np.asarray(obs, dtype=np.float64)))
    if not np.isfinite(logits).all():
        raise NumericalError("non-finite actor logits")
    return _softmax(logits)[0]

def value_forward(params: PolicyParams, obs: np.ndarray) -> float:
    _, _, v = _net_forward(params.critic, np.atleast_2d(np.asarray(obs, dtype=np.float64)))
    if not np.isfinite(v).all():
        raise NumericalError("non-finite critic value")
    return float(v[0, 0])


def compute_gae(
    transitions: Sequence[Transition],
    gamma: float,
    lam: float,
    bootstrap_value: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Advantages and value targets for one episode.

    ``bootstrap_value`` must be 0 when the episode ended in a terminal state
    and the critic's estimate of the successor state when it was truncated.
    """
    if not transitions:
        raise ValueError("empty trajectory")
    rewards = np.array([tr.reward for tr in transitions], dtype=np.float64)
    values = np.array([tr.value_estimate for tr in transitions], dtype=np.float64)
    return K.gae_scan(rewards, values, gamma, lam, float(bootstrap_value))


@dataclass
class _Batch:
    obs: np.ndarray        # (n, OBS_DIM)
    actions: np.ndarray    # (n,) int64
    old_log_probs: np.ndarray
    advantages: np.ndarray
    returns: np.ndarray

    def __len__(self) -> int:
        return self.obs.shape[0]


class Adam:
    """Per-parameter first/second-moment optimizer (beta1=0.9, beta2=0.999)."""

    def __init__(self, lr: float, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.t = 0
        self.m: list[np.ndarray] | None = None
        self.v: list[np.ndarray] | None = None

    def step(self, arrays: list[np.ndarray], grads: list[np.ndarray]) -> None:
        if self.m is None:
            self.m = [np.zeros_like(a) for a in arrays]
            self.v = [np.zeros_like(a) for a in arrays]
        self.t += 1
        b1c = 1.0 - self.beta1**self.t
        b2c = 1.0 - self.beta2**self.t
        for a, g, m, v in zip(arrays, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            a -= self.lr * (m / b1c) / (np.sqrt(v / b2c) + self.eps)


def _flat_arrays(params: PolicyParams) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for w, b in params.actor + params.critic:
        out += [w, b]
    return out


def _loss_and_grads(params: PolicyParams, batch: _Batch, cfg: PPOConfig):
    """Total loss plus gradients in _flat_arrays order."""
    n = len(batch)
    x = batch.obs
    h1a, h2a, logits = _net_forward(params.actor, x)
    h1c, h2c, v_out = _net_forward(params.critic, x)
    values = v_out[:, 0]

    probs = _softmax(logits)
    log_probs = np.log(probs)
    idx = np.arange(n)
    lp = log_probs[idx, batch.actions]
    ratio = np.exp(lp - batch.old_log_probs)

    adv = batch.advantages
    clipped = np.clip(ratio, 1.0 - cfg.clip_epsilon, 1.0 + cfg.clip_epsilon)
    surr1 = ratio * adv
    surr2 = clipped * adv
    policy_loss = -np.minimum(surr1, surr2).mean()

    entropy = -(probs * log_probs).sum(axis=1)
    value_err = values - batch.returns
    value_loss = cfg.value_coef * np.mean(value_err**2)
    total = policy_loss + value_loss - cfg.entropy_coef * entropy.mean()
    if not np.isfinite(total):
        raise NumericalError("non-finite PPO loss")

    # d(policy_loss)/d(logits): the min() kills the gradient where the
    # unclipped branch is not the active minimum
    active = (surr1 <= surr2).astype(np.float64)
    dlp = -(active * ratio * adv) / n
    dlogits = dlp[:, None] * (np.eye(N_ACTIONS)[batch.actions] - probs)
    # entropy bonus: dH/dz_j = -p_j (log p_j + H)
    dlogits += (cfg.entropy_coef / n) * probs * (log_probs + entropy[:, None])

    dvalues = (2.0 * cfg.value_coef / n) * value_err

    ga = K.mlp3_backward(
        params.actor[0][0], params.actor[1][0], params.actor[2][0],
        x, h1a, h2a, np.ascontiguousarray(dlogits),
    )
    gc = K.mlp3_backward(
        params.critic[0][0], params.critic[1][0], params.critic[2][0],
        x, h1c, h2c, np.ascontiguousarray(dvalues[:, None]),
    )
    diagnostics = {
        "policy_loss": float(policy_loss),
        "value_loss": float(value_loss),
        "entropy": float(entropy.mean()),
        "total_loss": float(total),
        "clip_fraction": float(np.mean((ratio < 1 - cfg.clip_epsilon) | (ratio > 1 + cfg.clip_epsilon))),
    }
    return total, list(ga) + list(gc), diagnostics


def ppo_update(
    params: PolicyParams,
    batch: _Batch,
    cfg: PPOConfig,
    optimizer: Adam | None = None,
    shuffle_rng: np.random.Generator | None = None,
) -> tuple[PolicyParams, dict]:
    """Clipped-surrogate update over shuffled minibatches.

    Advantages are normalised once at batch level.  A non-finite loss raises
    NumericalError before anything is committed, so the caller's params stay
    valid.
    """
    new = params.copy()
    opt = optimizer if optimizer is not None else Adam(cfg.learning_rate)
    rng = shuffle_rng if shuffle_rng is not None else np.random.Generator(np.random.PCG64(cfg.seed))

    adv = batch.advantages
    if len(batch) >= 2:
        std = adv.std()
        adv = (adv - adv.mean()) / (std + 1e-8)
    batch = replace_batch_adv(batch, adv)

    arrays = _flat_arrays(new)
    diag: dict = {}
    n = len(batch)
    for _ in range(cfg.update_epochs):
        order = rng.permutation(n)
        for lo in range(0, n, cfg.minibatch_size):
            sel = order[lo : lo + cfg.minibatch_size]
            mb = _Batch(
                obs=np.ascontiguousarray(batch.obs[sel]),
                actions=batch.actions[sel],
                old_log_probs=batch.old_log_probs[sel],
                advantages=batch.advantages[sel],
                returns=batch.returns[sel],
            )
            _, grads, diag = _loss_and_grads(new, mb, cfg)
            opt.step(arrays, grads)
    if not new.all_finite():
        raise NumericalError("non-finite parameters after update")
    diag["n_transitions"] = n
    return new, diag


def replace_batch_adv(batch: _Batch, adv: np.ndarray) -> _Batch:
    return _Batch(batch.obs, batch.actions, batch.old_log_probs, adv, batch.returns)


class EnvTables:
    """Flat array view of (topology, fault set) consumed by the kernels."""

    def __init__(self, t: Topology, faults=None):
        blocked = frozenset() if faults is None else frozenset(getattr(faults, "nodes", faults))
        self.blocked = blocked
        # topology arrays are read-only; kernels want plain writable buffers
        self.adjacency = t.adjacency.astype(np.int32, copy=True)
        mask = np.zeros(t.n_nodes, dtype=np.uint8)
        if blocked:
            mask[sorted(blocked)] = 1
        self.fault_mask = mask
        self.flags = np.ascontiguousarray(mask[self.adjacency], dtype=np.float64)
        self.coords_scaled = np.ascontiguousarray(
            t.centered_coords / float(t.coord_scale), dtype=np.float64
        )


SamplerFn = Callable[[int, Topology], tuple[int, int, FaultSet]]


def default_sampler(fault_spec: FaultSpec, master_seed: int, refresh: int = 50) -> SamplerFn:
    """Training episode source: fresh uniform endpoint pair every episode,
    fault set resampled from the spec every ``refresh`` episodes.

    Deterministic per episode index, so reruns and resumptions agree.
    """

    cache: dict[tuple[int, int], FaultSet] = {}

    def sample(episode: int, t: Topology) -> tuple[int, int, FaultSet]:
        block = episode // max(1, refresh)
        key = (id(t), block)
        if key not in cache:
            spec = replace(fault_spec, seed=derive_seed(master_seed, "train-faults", block))
            cache[key] = generate_faults(t, spec)
        faults = cache[key]
        rng = rng_for(master_seed, "train-pair", episode)
        alive = [c for c in range(t.n_nodes) if c not in faults]
        src, dst = (int(v) for v in rng.choice(len(alive), size=2, replace=False))
        return alive[src], alive[dst], faults

    return sample


def _sample_action(probs: np.ndarray, rng: np.random.Generator) -> int:
    u = rng.random()
    return int(min(np.searchsorted(np.cumsum(probs), u, side="right"), N_ACTIONS - 1))


def moving_average(series: np.ndarray, window: int = 20) -> np.ndarray:
    out = np.empty_like(series, dtype=np.float64)
    c = np.concatenate([[0.0], np.cumsum(series, dtype=np.float64)])
    for i in range(len(series)):
        lo = max(0, i - window + 1)
        out[i] = (c[i + 1] - c[lo]) / (i + 1 - lo)
    return out


def train(
    topology: Topology,
    fault_spec: FaultSpec,
    config: PPOConfig,
    sampler: SamplerFn | None = None,
    curriculum: Sequence[Topology] | None = None,
    validator: Callable[[PolicyParams], float] | None = None,
    validate_every: int = 1000,
) -> TrainingReport:
    """Run the on-policy training loop; deterministic given config.seed.

    When a ``validator`` is given, params are scored every ``validate_every``
    episodes (and at the end) and the best-scoring snapshot is returned
    instead of the last one.  Inference is deterministic argmax, so selecting
    on a held-out argmax score counters the mismatch between the stochastic
    rollout policy and its greedy collapse.
    """
    t_start = time.perf_counter()
    params = PolicyParams.initialize(rng_for(config.seed, "ppo-init"))
    action_rng = rng_for(config.seed, "ppo-actions")
    update_rng = rng_for(config.seed, "ppo-shuffle")
    optimizer = Adam(config.learning_rate)
    sample = sampler if sampler is not None else default_sampler(
        fault_spec, config.seed, config.fault_refresh_every
    )

    eg = config.epsilon_greedy
    epsilon = eg.start if eg.enabled else 0.0

    episode_returns = np.zeros(config.episodes, dtype=np.float64)
    pending: list[_Batch] = []
    tables_cache: dict[tuple[int, frozenset[int]], EnvTables] = {}
    buffers: dict[int, tuple] = {}
    best_score = -np.inf
    best_params = params

    for ep in range(config.episodes):
        topo = curriculum[ep % len(curriculum)] if curriculum else topology
        try:
            src, dst, faults = sample(ep, topo)
            if eg.enabled:
                batch, ep_return = _rollout_python(
                    topo, params, src, dst, faults, config, action_rng, epsilon
                )
                epsilon = max(eg.floor, epsilon * eg.decay)
            else:
                key = (id(topo), getattr(faults, "nodes", frozenset(faults or ())))
                tables = tables_cache.get(key)
                if tables is None:
                    tables = tables_cache[key] = EnvTables(topo, faults)
                batch, ep_return = _rollout_kernel(
                    topo, tables, params, src, dst, config, action_rng, buffers
                )
            pending.append(batch)
            episode_returns[ep] = ep_return

            if (ep + 1) % config.episodes_per_update == 0:
                cfg_now = _scheduled(config, ep)
                optimizer.lr = cfg_now.learning_rate
                params, _ = ppo_update(params, _concat(pending), cfg_now, optimizer, update_rng)
                pending = []
            if validator is not None and (ep + 1) % validate_every == 0:
                score = validator(params)
                if score > best_score:
                    best_score, best_params = score, params.copy()
        except NumericalError as exc:
            raise NumericalError(f"training aborted at episode {ep}: {exc}") from exc

    if pending:
        cfg_now = _scheduled(config, config.episodes - 1)
        optimizer.lr = cfg_now.learning_rate
        params, _ = ppo_update(params, _concat(pending), cfg_now, optimizer, update_rng)

    if validator is not None:
        score = validator(params)
        if score > best_score:
            best_score, best_params = score, params
        params = best_params

    return TrainingReport(
        episode_returns=episode_returns,
        smoothed_returns=moving_average(episode_returns, 20),
        params=params,
        wall_seconds=time.perf_counter() - t_start,
    )


def _rollout_kernel(
    topo: Topology,
    tables: EnvTables,
    params: PolicyParams,
    src: int,
    dst: int,
    config: PPOConfig,
    action_rng: np.random.Generator,
    buffers: dict,
) -> tuple[_Batch, float]:
    max_steps = MAX_HOPS_FACTOR * topo.n_nodes
    bufs = buffers.get(max_steps)
    if bufs is None:
        bufs = buffers[max_steps] = (
            np.empty((max_steps, OBS_DIM)),
            np.empty(max_steps, dtype=np.int64),
            np.empty(max_steps),
            np.empty(max_steps),
            np.empty(max_steps),
        )
    obs_b, act_b, logp_b, rew_b, val_b = bufs
    uniforms = action_rng.random(max_steps)
    n, _, _, bootstrap = K.rollout_episode(
        params.actor, params.critic,
        tables.adjacency, tables.flags, tables.coords_scaled, tables.fault_mask,
        src, dst, max_steps, uniforms,
        obs_b, act_b, logp_b, rew_b, val_b,
    )
    rewards = rew_b[:n].copy()
    adv, ret = K.gae_scan(rewards, val_b[:n].copy(), config.gamma, config.gae_lambda, bootstrap)
    batch = _Batch(
        obs=obs_b[:n].copy(),
        actions=act_b[:n].copy(),
        old_log_probs=logp_b[:n].copy(),
        advantages=adv,
        returns=ret,
    )
    return batch, float(rewards.sum())


def _rollout_python(
    topo: Topology,
    params: PolicyParams,
    src: int,
    dst: int,
    faults,
    config: PPOConfig,
    action_rng: np.random.Generator,
    epsilon: float,
) -> tuple[_Batch, float]:
    """Step-wise rollout through RoutingEnv; only path that supports the
    epsilon-greedy overlay."""
    env = RoutingEnv(topo)
    obs = env.reset(src, dst, faults)
    obs_list: list[np.ndarray] = []
    acts: list[int] = []
    logps: list[float] = []
    rewards: list[float] = []
    values: list[float] = []
    while True:
        probs = policy_forward(params, obs)
        value = value_forward(params, obs)
        if epsilon > 0.0 and action_rng.random() < epsilon:
            a = int(action_rng.integers(N_ACTIONS))
        else:
            a = _sample_action(probs, action_rng)
        out = env.step(a)
        obs_list.append(obs)
        acts.append(a)
        logps.append(float(np.log(probs[a])))
        rewards.append(out.reward)
        values.append(value)
        if out.terminated or out.truncated:
            bootstrap = 0.0 if out.terminated else value_forward(params, out.observation)
            break
        obs = out.observation

    r_arr = np.asarray(rewards)
    adv, ret = K.gae_scan(r_arr, np.asarray(values), config.gamma, config.gae_lambda, bootstrap)
    batch = _Batch(
        obs=np.ascontiguousarray(np.stack(obs_list)),
        actions=np.asarray(acts, dtype=np.int64),
        old_log_probs=np.asarray(logps),
        advantages=adv,
        returns=ret,
    )
    return batch, float(r_arr.sum())


def _scheduled(config: PPOConfig, episode: int) -> PPOConfig:
    """Config with linearly annealed learning rate / entropy at this episode."""
    if config.learning_rate_final is None and config.entropy_coef_final is None:
        return config
    frac = min(1.0, episode / max(1, config.episodes - 1))
    lr = config.learning_rate
    if config.learning_rate_final is not None:
        lr = lr + (config.learning_rate_final - lr) * frac
    ent = config.entropy_coef
    if config.entropy_coef_final is not None:
        ent = ent + (config.entropy_coef_final - ent) * frac
    return replace(config, learning_rate=lr, entropy_coef=ent,
                   learning_rate_final=None, entropy_coef_final=None)


def _concat(batches: list[_Batch]) -> _Batch:
    return _Batch(
        obs=np.ascontiguousarray(np.concatenate([b.obs for b in batches])),
        actions=np.concatenate([b.actions for b in batches]),
        old_log_probs=np.concatenate([b.old_log_probs for b in batches]),
        advantages=np.concatenate([b.advantages for b in batches]),
        returns=np.concatenate([b.returns for b in batches]),
    )


_ROUTE_STATUS = {0: RouteStatus.SUCCESS, 1: RouteStatus.STUCK, 2: RouteStatus.MAX_HOPS_EXCEEDED}


class PolicyRouter:
    """Frozen policy bound to one (topology, fault set); reusable across packets.

    Deploys the policy greedily (argmax; ties to the lowest action index).
    The policy has no visited-set, so cycles are possible and are cut off by
    the same 2N hop budget the greedy router gets.  Stepping into a fault
    loses the packet and maps to STUCK.
    """

    def __init__(self, t: Topology, params: PolicyParams, faults=None):
        self.topology = t
        self.params = params
        self.tables = EnvTables(t, faults)
        self.max_steps = MAX_HOPS_FACTOR * t.n_nodes
        self._path_buf = np.empty(self.max_steps + 1, dtype=np.int64)

    def route(self, src: int, dst: int) -> RouteResult:
        if src in self.tables.blocked or dst in self.tables.blocked:
            raise ValueError("routing endpoints must not be faulty")
        if src == dst:
            return RouteResult((src,), RouteStatus.SUCCESS, 0)
        status, hops, plen = K.policy_route(
            self.params.actor,
            self.tables.adjacency, self.tables.flags, self.tables.coords_scaled,
            self.tables.fault_mask, src, dst, self.max_steps, self._path_buf,
        )
        return RouteResult(tuple(int(v) for v in self._path_buf[:plen]), _ROUTE_STATUS[status], hops)


def route_rl(
    t: Topology,
    params: PolicyParams,
    src: int,
    dst: int,
    faults=None,
) -> RouteResult:
    """One-shot convenience wrapper around PolicyRouter."""
    return PolicyRouter(t, params, faults).route(src, dst)


def _encode_array(a: np.ndarray) -> dict:
    return {
        "shape": list(a.shape),
        "data": base64.b64encode(np.ascontiguousarray(a, dtype="<f8").tobytes()).decode("ascii"),
    }


def _decode_array(d: dict) -> np.ndarray:
    raw = np.frombuffer(base64.b64decode(d["data"]), dtype="<f8")
    return np.ascontiguousarray(raw.reshape(d["shape"]).astype(np.float64))


def save_params(
    params: PolicyParams,
    path,
    modulus: NetworkModulus | None = None,
    config: PPOConfig | None = None,
    master_seed: int | None = None,
) -> None:
    """Write the policy to JSON: shapes + row-major float64 weights (base64,
    little-endian), plus the training config, modulus and seed for provenance."""
    doc = {
        "format": PARAMS_FORMAT,
        "format_version": PARAMS_FORMAT_VERSION,
        "alpha": [modulus.alpha.re, modulus.alpha.im] if modulus else None,
        "master_seed": master_seed,
        "config": asdict(config) if config else None,
        "actor": [{"w": _encode_array(w), "b": _encode_array(b)} for w, b in params.actor],
        "critic": [{"w": _encode_array(w), "b": _encode_array(b)} for w, b in params.critic],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_params(path) -> tuple[PolicyParams, dict]:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != PARAMS_FORMAT:
        raise ValueError(f"{path}: not a {PARAMS_FORMAT} file")
    if doc.get("format_version") != PARAMS_FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported format version {doc.get('format_version')}")
    params = PolicyParams(
        actor=[(_decode_array(l["w"]), _decode_array(l["b"])) for l in doc["actor"]],
        critic=[(_decode_array(l["w"]), _decode_array(l["b"])) for l in doc["critic"]],
    )
    meta = {k: doc.get(k) for k in ("alpha", "master_seed", "config")}
    if meta["alpha"]:
        meta["modulus"] = NetworkModulus.create(GaussianInt(*meta["alpha"]))
    return params, meta
