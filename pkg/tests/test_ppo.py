"""PPO oracles: hand-computed GAE, finite-difference gradients, clip identities,
determinism and serialization round-trips."""

from __future__ import annotations

import numpy as np
import pytest

from gaussnet.env import OBS_DIM, N_ACTIONS
from gaussnet.faults import FaultSpec
from gaussnet.gaussian import NetworkModulus, bfs_distance, build_topology
from gaussnet.ppo import (
    Adam,
    NumericalError,
    PPOConfig,
    PolicyParams,
    Transition,
    _Batch,
    _flat_arrays,
    _loss_and_grads,
    compute_gae,
    load_params,
    moving_average,
    policy_forward,
    ppo_update,
    route_rl,
    save_params,
    train,
    value_forward,
)
from gaussnet.seeding import rng_for


@pytest.fixture(scope="module")
def t3():
    return build_topology(NetworkModulus.from_k(3))


def tr(obs, action, log_prob, reward, value, terminal):
    return Transition(obs, action, log_prob, reward, value, terminal)


class TestPolicyForward:
    def test_zero_final_layer_uniform(self):
        params = PolicyParams.initialize(rng_for(1, "pf"))
        w3, b3 = params.actor[2]
        params.actor[2] = (np.zeros_like(w3), np.zeros_like(b3))
        p = policy_forward(params, np.ones(OBS_DIM) * 0.3)
        np.testing.assert_allclose(p, 0.25)

    def test_sums_to_one_thousand_draws(self):
        for i in range(1000):
            params = PolicyParams.initialize(rng_for(2, "pf", i))
            p = policy_forward(params, rng_for(3, "obs", i).uniform(-1, 1, OBS_DIM))
            assert abs(p.sum() - 1.0) < 1e-9
            assert (p > 0).all()

    def test_argmax_shift_invariant(self):
        params = PolicyParams.initialize(rng_for(4, "pf"))
        obs = rng_for(5, "obs").uniform(-1, 1, OBS_DIM)
        base = np.argmax(policy_forward(params, obs))
        w3, b3 = params.actor[2]
        params.actor[2] = (w3, b3 + 7.5)
        assert np.argmax(policy_forward(params, obs)) == base

    def test_non_finite_raises(self):
        params = PolicyParams.initialize(rng_for(6, "pf"))
        w1, b1 = params.actor[0]
        w1[0, 0] = np.nan
        with pytest.raises(NumericalError):
            policy_forward(params, np.zeros(OBS_DIM))


class TestGae:
    def test_single_step_terminal(self):
        obs = np.zeros(OBS_DIM)
        adv, ret = compute_gae([tr(obs, 0, -1.4, 100.0, 0.0, True)], 0.95, 0.92, 0.0)
        assert adv[0] == 100.0
        assert ret[0] == 100.0

    def test_hand_computed_two_step(self):
        obs = np.zeros(OBS_DIM)
        traj = [tr(obs, 0, -1.4, -1.0, 0.0, False), tr(obs, 1, -1.4, 100.0, 0.0, True)]
        adv, ret = compute_gae(traj, 0.95, 0.92, 0.0)
        assert abs(adv[0] - 86.4) < 1e-12
        assert abs(adv[1] - 100.0) < 1e-12
        np.testing.assert_allclose(ret, adv)  # all values are zero

    def test_lambda_zero_is_td_error(self):
        rng = rng_for(7, "gae")
        obs = np.zeros(OBS_DIM)
        rewards = rng.normal(size=9)
        values = rng.normal(size=9)
        traj = [tr(obs, 0, -1.4, rewards[i], values[i], i == 8) for i in range(9)]
        bootstrap = 0.0
        adv, _ = compute_gae(traj, 0.95, 0.0, bootstrap)
        for i in range(9):
            nxt = bootstrap if i == 8 else values[i + 1]
            delta = rewards[i] + 0.95 * nxt - values[i]
            assert abs(adv[i] - delta) < 1e-12

    def test_empty_trajectory_rejected(self):
        with pytest.raises(ValueError):
            compute_gae([], 0.95, 0.92, 0.0)


class TestClippedObjective:
    def test_clip_binds_ratio_15(self):
        # ratio 1.5 with positive advantage: objective = 1.2 * adv
        adv, eps, ratio = 2.0, 0.2, 1.5
        clipped = np.clip(ratio, 1 - eps, 1 + eps)
        assert min(ratio * adv, clipped * adv) == pytest.approx(1.2 * adv)

    def test_clip_inactive_inside_band(self):
        rng = rng_for(8, "clip")
        for _ in range(200):
            ratio = rng.uniform(0.8, 1.2)
            adv = rng.normal()
            clipped = np.clip(ratio, 0.8, 1.2)
            assert min(ratio * adv, clipped * adv) == pytest.approx(ratio * adv)

    def test_objective_never_exceeds_branches(self):
        rng = rng_for(9, "clip2")
        ratio = rng.uniform(0.0, 3.0, size=500)
        adv = rng.normal(size=500)
        clipped = np.clip(ratio, 0.8, 1.2)
        obj = np.minimum(ratio * adv, clipped * adv)
        assert (obj <= ratio * adv + 1e-15).all()
        assert (obj <= clipped * adv + 1e-15).all()

    def test_first_pass_ratio_is_one(self):
        # old log-probs taken from the same params -> ratio exactly 1, so the
        # per-sample objective equals the advantage
        params = PolicyParams.initialize(rng_for(10, "pp"))
        rng = rng_for(11, "batch")
        obs = rng.uniform(-1, 1, size=(6, OBS_DIM))
        actions = rng.integers(0, N_ACTIONS, size=6)
        logits = np.stack([np.log(policy_forward(params, o)) for o in obs])
        old_lp = logits[np.arange(6), actions]
        adv = rng.normal(size=6)
        batch = _Batch(obs=obs, actions=actions, old_log_probs=old_lp,
                       advantages=adv, returns=rng.normal(size=6))
        _, _, diag = _loss_and_grads(params, batch, PPOConfig())
        assert diag["policy_loss"] == pytest.approx(-adv.mean(), abs=1e-12)
        assert diag["clip_fraction"] == 0.0


class TestGradientCheck:
    def test_full_loss_gradient_matches_finite_differences(self):
        cfg = PPOConfig()
        params = PolicyParams.initialize(rng_for(12, "gc"))
        rng = rng_for(13, "gc-batch")
        n = 5
        obs = rng.uniform(-1, 1, size=(n, OBS_DIM))
        actions = rng.integers(0, N_ACTIONS, size=n)
        old_lp = np.log(np.stack([policy_forward(params, o) for o in obs]))[np.arange(n), actions]
        old_lp += rng.normal(scale=0.05, size=n)  # make ratios != 1
        # moderate scales keep the fd-roundoff floor well under the tolerance
        batch = _Batch(obs=obs, actions=actions, old_log_probs=old_lp,
                       advantages=rng.normal(size=n), returns=rng.normal(size=n) * 2)

        _, grads, _ = _loss_and_grads(params, batch, cfg)
        arrays = _flat_arrays(params)
        eps = 1e-5
        checked = 0
        for arr, g in zip(arrays, grads):
            flat, gflat = arr.ravel(), np.asarray(g).ravel()
            picks = rng_for(14, "pick", checked).choice(flat.size, size=min(8, flat.size), replace=False)
            for pos in picks:
                orig = flat[pos]
                flat[pos] = orig + eps
                up, _, _ = _loss_and_grads(params, batch, cfg)
                flat[pos] = orig - eps
                dn, _, _ = _loss_and_grads(params, batch, cfg)
                flat[pos] = orig
                fd = (up - dn) / (2 * eps)
                # denominator floor guards the quotient where the true
                # derivative is ~0 and central differences are pure roundoff
                denom = max(abs(fd) + abs(gflat[pos]), 1e-4)
                assert abs(gflat[pos] - fd) / denom < 1e-4
            checked += 1
        assert checked == 12  # both nets, three layers, w and b each


class TestPpoUpdate:
    def make_batch(self, params, n=80, seed=15):
        rng = rng_for(seed, "mkbatch")
        obs = rng.uniform(-1, 1, size=(n, OBS_DIM))
        actions = rng.integers(0, N_ACTIONS, size=n)
        lp = np.log(np.stack([policy_forward(params, o) for o in obs]))[np.arange(n), actions]
        return _Batch(obs=obs, actions=actions, old_log_probs=lp,
                      advantages=rng.normal(size=n) * 3 + 1, returns=rng.normal(size=n) * 40)

    def test_advantage_normalization(self):
        params = PolicyParams.initialize(rng_for(16, "pu"))
        batch = self.make_batch(params)
        adv = batch.advantages
        norm = (adv - adv.mean()) / (adv.std() + 1e-8)
        assert abs(norm.mean()) < 1e-9
        assert abs(norm.std() ** 2 - 1.0) < 1e-6

    def test_update_changes_and_keeps_finite(self):
        params = PolicyParams.initialize(rng_for(17, "pu"))
        batch = self.make_batch(params)
        new, diag = ppo_update(params, batch, PPOConfig(), Adam(3e-4))
        assert new.all_finite()
        assert diag["n_transitions"] == 80
        assert any(
            not np.array_equal(a, b)
            for (a, _), (b, _) in zip(params.actor, new.actor)
        )

    def test_non_finite_batch_preserves_params(self):
        params = PolicyParams.initialize(rng_for(18, "pu"))
        batch = self.make_batch(params)
        batch.advantages[0] = np.nan
        before = [a.copy() for a in _flat_arrays(params)]
        with pytest.raises(NumericalError):
            ppo_update(params, batch, PPOConfig(), Adam(3e-4))
        for a, b in zip(_flat_arrays(params), before):
            np.testing.assert_array_equal(a, b)


class TestTrainLoop:
    def test_zero_episodes_identity(self, t3):
        cfg = PPOConfig(episodes=0, seed=44)
        rep = train(t3, FaultSpec(density=0.0, seed=0), cfg)
        fresh = PolicyParams.initialize(rng_for(44, "ppo-init"))
        for (w1, b1), (w2, b2) in zip(rep.params.actor, fresh.actor):
            np.testing.assert_array_equal(w1, w2)
            np.testing.assert_array_equal(b1, b2)
        assert rep.episode_returns.size == 0

    def test_bit_identical_reruns(self, t3):
        cfg = PPOConfig(episodes=60, seed=7, learning_rate=1e-3)
        spec = FaultSpec(density=0.2, seed=0)
        rep1 = train(t3, spec, cfg)
        rep2 = train(t3, spec, cfg)
        np.testing.assert_array_equal(rep1.episode_returns, rep2.episode_returns)
        for (w1, _), (w2, _) in zip(rep1.params.actor, rep2.params.actor):
            np.testing.assert_array_equal(w1, w2)
        for (w1, _), (w2, _) in zip(rep1.params.critic, rep2.params.critic):
            np.testing.assert_array_equal(w1, w2)

    def test_fixed_pair_reaches_oracle_return(self, t3):
        # src 0 -> dst 3 is 3 hops; a converged argmax rollout must collect
        # return 100 - 2 (two intermediate hop costs)
        spec = FaultSpec(density=0.0, seed=0)

        def fixed_pair(ep, topo):
            from gaussnet.faults import FaultSet
            return 0, 3, FaultSet(nodes=frozenset(), spec=spec)

        cfg = PPOConfig(episodes=400, seed=3, learning_rate=1e-3)
        rep = train(t3, spec, cfg, sampler=fixed_pair)
        r = route_rl(t3, rep.params, 0, 3)
        assert r.delivered
        assert r.hops == 3 == bfs_distance(t3, 0, 3)
        assert 100.0 - (r.hops - 1) == 98.0

    def test_moving_average_window(self):
        s = np.arange(1, 41, dtype=float)
        ma = moving_average(s, 20)
        assert ma[0] == 1.0
        assert ma[4] == np.mean(s[:5])
        assert ma[-1] == np.mean(s[20:40])


class TestRouteRl:
    def test_delivered_respects_bfs_bound(self, t3):
        params = PolicyParams.initialize(rng_for(19, "rr"))
        for trial in range(30):
            rng = rng_for(20, "pair", trial)
            src, dst = (int(v) for v in rng.choice(25, size=2, replace=False))
            r = route_rl(t3, params, src, dst)
            if r.delivered:
                assert r.hops >= bfs_distance(t3, src, dst)
            else:
                assert r.hops == -1

    def test_src_equals_dst(self, t3):
        params = PolicyParams.initialize(rng_for(21, "rr"))
        r = route_rl(t3, params, 5, 5)
        assert r.delivered and r.hops == 0

    def test_faulty_endpoint_rejected(self, t3):
        params = PolicyParams.initialize(rng_for(22, "rr"))
        with pytest.raises(ValueError):
            route_rl(t3, params, 0, 3, {0})


class TestSerialization:
    def test_bit_exact_round_trip(self, tmp_path, t3):
        params = PolicyParams.initialize(rng_for(23, "ser"))
        cfg = PPOConfig(seed=9)
        path = tmp_path / "policy.json"
        save_params(params, path, modulus=t3.modulus, config=cfg, master_seed=9)
        loaded, meta = load_params(path)
        for (w1, b1), (w2, b2) in zip(params.actor + params.critic, loaded.actor + loaded.critic):
            np.testing.assert_array_equal(w1, w2)
            np.testing.assert_array_equal(b1, b2)
        assert meta["alpha"] == [3, 4]
        assert meta["modulus"].n_nodes == 25
        assert meta["config"]["gamma"] == 0.95

    def test_identical_inference_decisions(self, tmp_path):
        params = PolicyParams.initialize(rng_for(24, "ser"))
        path = tmp_path / "p.json"
        save_params(params, path)
        loaded, _ = load_params(path)
        rng = rng_for(25, "obs")
        for _ in range(1000):
            obs = rng.uniform(-1, 1, OBS_DIM)
            a = np.argmax(policy_forward(params, obs))
            b = np.argmax(policy_forward(loaded, obs))
            assert a == b

    def test_rejects_foreign_file(self, tmp_path):
        p = tmp_path / "x.json"
        p.write_text('{"format": "something-else"}')
        with pytest.raises(ValueError):
            load_params(p)


def test_value_forward_scalar(t3):
    params = PolicyParams.initialize(rng_for(26, "vf"))
    v = value_forward(params, np.zeros(OBS_DIM))
    assert isinstance(v, float)


def test_config_validation():
    with pytest.raises(ValueError):
        PPOConfig(gamma=0.0)
    with pytest.raises(ValueError):
        PPOConfig(clip_epsilon=1.0)
    with pytest.raises(ValueError):
        PPOConfig(episodes=-1)
