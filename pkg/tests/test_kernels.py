"""Backend parity: every kernel must agree with a plain numpy reference and
the compiled backend must agree with the python one on identical inputs."""

from __future__ import annotations

import numpy as np
import pytest

from gaussnet._kernels import available_backends
from gaussnet.env import RoutingEnv
from gaussnet.faults import FaultSpec, inject_uniform
from gaussnet.gaussian import NetworkModulus, build_topology
from gaussnet.ppo import EnvTables, PolicyParams
from gaussnet.seeding import rng_for

BACKENDS = available_backends()


@pytest.fixture(scope="module")
def t3():
    return build_topology(NetworkModulus.from_k(3))


def random_net(rng, fan_in=8, hidden=64, fan_out=4):
    def layer(i, o):
        return (rng.normal(size=(o, i)), rng.normal(size=o))

    return [layer(fan_in, hidden), layer(hidden, hidden), layer(hidden, fan_out)]


def reference_forward(layers, x):
    (w1, b1), (w2, b2), (w3, b3) = layers
    h1 = np.tanh(x @ w1.T + b1)
    h2 = np.tanh(h1 @ w2.T + b2)
    return h1, h2, h2 @ w3.T + b3


@pytest.mark.parametrize("backend", sorted(BACKENDS))
def test_forward_matches_reference(backend):
    impl = BACKENDS[backend]
    rng = rng_for(1, "kfwd")
    layers = random_net(rng)
    x = rng.normal(size=(17, 8))
    got = impl.mlp3_forward(layers[0][0], layers[0][1], layers[1][0], layers[1][1],
                            layers[2][0], layers[2][1], x)
    want = reference_forward(layers, x)
    for g, w in zip(got, want):
        np.testing.assert_allclose(np.asarray(g), w, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("backend", sorted(BACKENDS))
def test_backward_matches_finite_differences(backend):
    impl = BACKENDS[backend]
    rng = rng_for(2, "kbwd")
    layers = random_net(rng, fan_in=5, hidden=6, fan_out=3)
    x = rng.normal(size=(4, 5))
    dout = rng.normal(size=(4, 3))

    h1, h2, _ = reference_forward(layers, x)
    grads = impl.mlp3_backward(layers[0][0], layers[1][0], layers[2][0],
                               x, np.asarray(h1), np.asarray(h2), dout)

    def loss(flat_layers):
        _, _, out = reference_forward(flat_layers, x)
        return float((out * dout).sum())

    eps = 1e-6
    for li, (w, b) in enumerate(layers):
        for arr_idx, arr in enumerate((w, b)):
            g = np.asarray(grads[2 * li + arr_idx])
            flat = arr.ravel()
            n_pick = min(5, flat.size)
            for pos in rng_for(3, "pick", li, arr_idx).choice(flat.size, size=n_pick, replace=False):
                orig = flat[pos]
                flat[pos] = orig + eps
                up = loss(layers)
                flat[pos] = orig - eps
                dn = loss(layers)
                flat[pos] = orig
                fd = (up - dn) / (2 * eps)
                np.testing.assert_allclose(g.ravel()[pos], fd, rtol=1e-5, atol=1e-7)


@pytest.mark.parametrize("backend", sorted(BACKENDS))
def test_gae_matches_reference(backend):
    impl = BACKENDS[backend]
    rng = rng_for(4, "kgae")
    rewards = rng.normal(size=13)
    values = rng.normal(size=13)
    gamma, lam, bootstrap = 0.95, 0.92, 0.7
    adv, ret = impl.gae_scan(rewards, values, gamma, lam, bootstrap)

    # direct double-sum definition
    deltas = np.empty(13)
    for i in range(13):
        next_v = bootstrap if i == 12 else values[i + 1]
        deltas[i] = rewards[i] + gamma * next_v - values[i]
    for i in range(13):
        expect = sum((gamma * lam) ** l * deltas[i + l] for l in range(13 - i))
        np.testing.assert_allclose(adv[i], expect, rtol=1e-12)
        np.testing.assert_allclose(ret[i], expect + values[i], rtol=1e-12)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")
class TestBackendParity:
    def test_rollout_parity(self, t3):
        rng = rng_for(5, "kprl")
        params = PolicyParams.initialize(rng)
        fs = inject_uniform(t3, FaultSpec(density=0.3, seed=8))
        tables = EnvTables(t3, fs)
        alive = [c for c in range(25) if c not in fs]
        max_steps = 50
        for trial in range(40):
            pick = rng_for(6, "pair", trial)
            i, j = pick.choice(len(alive), size=2, replace=False)
            src, dst = alive[int(i)], alive[int(j)]
            uniforms = rng_for(7, "u", trial).random(max_steps)
            results = {}
            for name, impl in BACKENDS.items():
                bufs = [np.zeros((max_steps, 8)), np.zeros(max_steps, dtype=np.int64),
                        np.zeros(max_steps), np.zeros(max_steps), np.zeros(max_steps)]
                out = impl.rollout_episode(
                    params.actor, params.critic, tables.adjacency, tables.flags,
                    tables.coords_scaled, tables.fault_mask, src, dst, max_steps,
                    uniforms, *bufs)
                results[name] = (out, bufs)
            (n_p, term_p, reach_p, boot_p), bufs_p = results["python"]
            (n_c, term_c, reach_c, boot_c), bufs_c = results["cython"]
            assert (n_p, term_p, reach_p) == (n_c, term_c, reach_c)
            np.testing.assert_allclose(boot_p, boot_c, rtol=1e-12, atol=1e-12)
            for bp, bc in zip(bufs_p, bufs_c):
                np.testing.assert_allclose(bp[:n_p], bc[:n_c], rtol=1e-12, atol=1e-12)

    def test_route_parity(self, t3):
        rng = rng_for(9, "krt")
        params = PolicyParams.initialize(rng)
        fs = inject_uniform(t3, FaultSpec(density=0.2, seed=3))
        tables = EnvTables(t3, fs)
        alive = [c for c in range(25) if c not in fs]
        for trial in range(40):
            pick = rng_for(10, "pair", trial)
            i, j = pick.choice(len(alive), size=2, replace=False)
            src, dst = alive[int(i)], alive[int(j)]
            outs = {}
            for name, impl in BACKENDS.items():
                path = np.zeros(51, dtype=np.int64)
                status, hops, plen = impl.policy_route(
                    params.actor, tables.adjacency, tables.flags,
                    tables.coords_scaled, tables.fault_mask, src, dst, 50, path)
                outs[name] = (status, hops, list(path[:plen]))
            assert outs["python"] == outs["cython"]


@pytest.mark.parametrize("backend", sorted(BACKENDS))
def test_rollout_agrees_with_env_replay(backend, t3):
    # replaying the kernel's actions through RoutingEnv must reproduce the
    # observations, rewards and termination the kernel reported
    impl = BACKENDS[backend]
    rng = rng_for(11, "kenv")
    params = PolicyParams.initialize(rng)
    fs = inject_uniform(t3, FaultSpec(density=0.35, seed=12))
    tables = EnvTables(t3, fs)
    alive = [c for c in range(25) if c not in fs]
    max_steps = 50
    for trial in range(25):
        pick = rng_for(12, "pair", trial)
        i, j = pick.choice(len(alive), size=2, replace=False)
        src, dst = alive[int(i)], alive[int(j)]
        uniforms = rng_for(13, "u", trial).random(max_steps)
        obs_b = np.zeros((max_steps, 8))
        act_b = np.zeros(max_steps, dtype=np.int64)
        logp_b = np.zeros(max_steps)
        rew_b = np.zeros(max_steps)
        val_b = np.zeros(max_steps)
        n, terminated, reached, _ = impl.rollout_episode(
            params.actor, params.critic, tables.adjacency, tables.flags,
            tables.coords_scaled, tables.fault_mask, src, dst, max_steps,
            uniforms, obs_b, act_b, logp_b, rew_b, val_b)

        env = RoutingEnv(t3)
        obs = env.reset(src, dst, fs)
        for step in range(n):
            np.testing.assert_allclose(obs, obs_b[step], rtol=0, atol=0)
            out = env.step(int(act_b[step]))
            assert out.reward == rew_b[step]
            obs = out.observation
        assert out.terminated == terminated
        assert out.reached_dst == reached
