"""numpy implementation of the hot kernels.

Reference backend: always available, used when the compiled extension is
missing or disabled.  The compiled twin in ``_ckernels.pyx`` implements the
same signatures; both operate on float64 C-contiguous arrays.

Layer convention: ``W`` has shape (fan_out, fan_in) and a batch ``x`` of
shape (n, fan_in) maps to ``x @ W.T + b``.  Hidden activations are tanh, the
output layer is linear.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def mlp3_forward(w1, b1, w2, b2, w3, b3, x):
    """Forward pass of the fixed two-hidden-layer net; returns (h1, h2, out)."""
    h1 = np.tanh(x @ w1.T + b1)
    h2 = np.tanh(h1 @ w2.T + b2)
    out = h2 @ w3.T + b3
    return h1, h2, out


def mlp3_backward(w1, w2, w3, x, h1, h2, dout):
    """Gradients of a scalar loss given d(loss)/d(out); returns per-layer grads."""
    dw3 = dout.T @ h2
    db3 = dout.sum(axis=0)
    dz2 = (dout @ w3) * (1.0 - h2 * h2)
    dw2 = dz2.T @ h1
    db2 = dz2.sum(axis=0)
    dz1 = (dz2 @ w2) * (1.0 - h1 * h1)
    dw1 = dz1.T @ x
    db1 = dz1.sum(axis=0)
    return dw1, db1, dw2, db2, dw3, db3


def _mlp3_single(layers, x):
    (w1, b1), (w2, b2), (w3, b3) = layers
    h1 = np.tanh(w1 @ x + b1)
    h2 = np.tanh(w2 @ h1 + b2)
    return w3 @ h2 + b3


def _softmax1(logits):
    e = np.exp(logits - logits.max())
    return e / e.sum()


def _obs_of(coords_scaled, flags, cur, dst):
    out = np.empty(8, dtype=np.float64)
    out[0:2] = coords_scaled[cur]
    out[2:4] = coords_scaled[dst]
    out[4:8] = flags[cur]
    return out


def rollout_episode(actor, critic, adjacency, flags, coords_scaled, fault_mask,
                    src, dst, max_steps, uniforms,
                    obs_out, act_out, logp_out, rew_out, val_out):
    """Run one training episode; returns (steps, terminated, reached, bootstrap).

    Mirrors RoutingEnv.step semantics exactly; one uniform is consumed per
    step for action sampling.
    """
    cur = src
    t = 0
    terminated = reached = False
    bootstrap = 0.0
    while t < max_steps:
        obs = _obs_of(coords_scaled, flags, cur, dst)
        probs = _softmax1(_mlp3_single(actor, obs))
        value = _mlp3_single(critic, obs)[0]

        a = int(min(np.searchsorted(np.cumsum(probs), uniforms[t], side="right"), 3))
        obs_out[t] = obs
        act_out[t] = a
        logp_out[t] = np.log(probs[a])
        val_out[t] = value

        nxt = int(adjacency[cur, a])
        if nxt == dst:
            rew_out[t] = 100.0
            terminated = reached = True
            t += 1
            break
        if fault_mask[nxt]:
            rew_out[t] = -50.0
            terminated = True
            t += 1
            break
        rew_out[t] = -1.0
        cur = nxt
        t += 1

    if not terminated:
        obs = _obs_of(coords_scaled, flags, cur, dst)
        bootstrap = float(_mlp3_single(critic, obs)[0])
    return t, terminated, reached, bootstrap


def policy_route(actor, adjacency, flags, coords_scaled, fault_mask,
                 src, dst, max_steps, path_out):
    """Argmax deployment of the policy; returns (status, hops, path_len).

    status: 0 = delivered, 1 = stepped into a fault, 2 = hop budget exceeded.
    """
    cur = src
    path_out[0] = src
    plen = 1
    hops = 0
    status = 2
    while hops < max_steps:
        obs = _obs_of(coords_scaled, flags, cur, dst)
        a = int(np.argmax(_mlp3_single(actor, obs)))
        nxt = int(adjacency[cur, a])
        hops += 1
        if fault_mask[nxt]:
            status = 1
            break
        path_out[plen] = nxt
        plen += 1
        cur = nxt
        if cur == dst:
            status = 0
            break
    return status, (hops if status == 0 else -1), plen


def gae_scan(rewards, values, gamma, lam, bootstrap_value):
    """Generalized advantage estimation over one episode.

    delta_t = r_t + gamma * V(s_{t+1}) - V(s_t), with V after the last step
    replaced by ``bootstrap_value`` (0 for terminal episodes).  Advantages are
    the (gamma*lam)-discounted suffix sums of the deltas; returns are
    advantages + values.
    """
    T = rewards.shape[0]
    adv = np.empty(T, dtype=np.float64)
    next_v = float(bootstrap_value)
    acc = 0.0
    for i in range(T - 1, -1, -1):
        delta = rewards[i] + gamma * next_v - values[i]
        acc = delta + gamma * lam * acc
        adv[i] = acc
        next_v = values[i]
    return adv, adv + values
