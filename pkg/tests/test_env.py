"""Reward semantics, termination and observation contract of the episode env."""

from __future__ import annotations

import numpy as np
import pytest

from gaussnet.env import OBS_DIM, RoutingEnv, build_observation
from gaussnet.gaussian import NetworkModulus, build_topology


@pytest.fixture(scope="module")
def t3():
    return build_topology(NetworkModulus.from_k(3))


def env_for(t3, src=0, dst=3, faults=frozenset()):
    env = RoutingEnv(t3)
    obs = env.reset(src, dst, faults)
    return env, obs


def test_reset_shape_and_flags(t3):
    env, obs = env_for(t3)
    assert obs.shape == (OBS_DIM,)
    assert (obs[4:] == 0).all()
    assert (np.abs(obs[:4]) <= 1).all()
    assert env.max_steps == 50


def test_reset_rejects_bad_endpoints(t3):
    env = RoutingEnv(t3)
    with pytest.raises(ValueError):
        env.reset(2, 2)
    with pytest.raises(ValueError):
        env.reset(0, 3, {3})
    with pytest.raises(ValueError):
        env.reset(0, 3, {0})


def test_reset_deterministic_and_pure(t3):
    _, obs1 = env_for(t3, 5, 9, {4})
    _, obs2 = env_for(t3, 5, 9, {4})
    assert (obs1 == obs2).all()
    assert (obs1 == build_observation(t3, 5, 9, {4})).all()


def test_step_into_destination(t3):
    env, _ = env_for(t3, 2, 3)  # node 3 is one +1 step east of node 2
    out = env.step(2)
    assert out.reward == 100.0
    assert out.terminated and out.reached_dst and not out.hit_fault
    assert env.current == 3


def test_step_into_fault_loses_packet_in_place(t3):
    env, obs0 = env_for(t3, 2, 5, faults={3})
    out = env.step(2)  # east into the faulty node 3
    assert out.reward == -50.0
    assert out.terminated and out.hit_fault and not out.reached_dst
    assert env.current == 2  # did not advance
    assert (out.observation == obs0).all()


def test_ordinary_hop(t3):
    env, _ = env_for(t3, 0, 3)
    out = env.step(2)
    assert out.reward == -1.0
    assert not out.terminated and not out.truncated
    assert env.current == 1


def test_reward_partition_random_walk(t3):
    env, _ = env_for(t3, 0, 12, faults={7, 11})
    rng = np.random.default_rng(5)
    while True:
        out = env.step(int(rng.integers(4)))
        assert out.reward in (100.0, -50.0, -1.0)
        if out.terminated or out.truncated:
            break


def test_truncation_at_2n(t3):
    env, _ = env_for(t3, 0, 3)
    # pace in a safe cycle: east, west, east, west... never reaches dst=3
    for step in range(50):
        out = env.step(3 if step % 2 else 2)
        assert not out.terminated
    assert out.truncated
    assert env.steps_taken == 50
    with pytest.raises(RuntimeError):
        env.step(0)


def test_fault_flags_reflect_neighbours(t3):
    faults = {1, 18}
    obs = build_observation(t3, 0, 5, faults)
    # direction order +i, -i, +1, -1 -> neighbours 18, 7, 1, 24
    assert obs[4:].tolist() == [1.0, 0.0, 1.0, 0.0]


def test_action_totality(t3):
    for node in range(25):
        for a in range(4):
            env = RoutingEnv(t3)
            env.reset(node, (node + 13) % 25)
            out = env.step(a)
            assert out.reward in (100.0, -50.0, -1.0)


def test_return_bound(t3):
    # return lies in [-50 - (2N-1), 100]; best case is 100 - (L-1)
    env, _ = env_for(t3, 0, 3)
    total = 0.0
    for a in (2, 2, 2):
        out = env.step(a)
        total += out.reward
    assert out.reached_dst
    assert total == 100.0 - 2.0
