# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_pykernels``.

The networks here are tiny (widest layer 64), so per-call Python and BLAS
dispatch overhead dominates a numpy implementation; plain C loops win by a
wide margin at batch size 1, which is what every environment step uses.
"""

import numpy as np

from libc.math cimport exp, log, tanh

BACKEND_NAME = "cython"


cdef void _dense(double[:, ::1] w, double[::1] b, double[:, ::1] x,
                 double[:, ::1] out, bint apply_tanh) noexcept nogil:
    cdef Py_ssize_t n = x.shape[0], fin = x.shape[1], fout = w.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double acc
    for i in range(n):
        for j in range(fout):
            acc = b[j]
            for k in range(fin):
                acc += w[j, k] * x[i, k]
            out[i, j] = tanh(acc) if apply_tanh else acc


def mlp3_forward(double[:, ::1] w1, double[::1] b1,
                 double[:, ::1] w2, double[::1] b2,
                 double[:, ::1] w3, double[::1] b3,
                 double[:, ::1] x):
    """Forward pass of the fixed two-hidden-layer net; returns (h1, h2, out)."""
    cdef Py_ssize_t n = x.shape[0]
    h1_arr = np.empty((n, w1.shape[0]), dtype=np.float64)
    h2_arr = np.empty((n, w2.shape[0]), dtype=np.float64)
    out_arr = np.empty((n, w3.shape[0]), dtype=np.float64)
    cdef double[:, ::1] h1 = h1_arr, h2 = h2_arr, out = out_arr
    _dense(w1, b1, x, h1, True)
    _dense(w2, b2, h1, h2, True)
    _dense(w3, b3, h2, out, False)
    return h1_arr, h2_arr, out_arr


def mlp3_backward(double[:, ::1] w1, double[:, ::1] w2, double[:, ::1] w3,
                  double[:, ::1] x, double[:, ::1] h1, double[:, ::1] h2,
                  double[:, ::1] dout):
    """Gradients of a scalar loss given d(loss)/d(out); returns per-layer grads."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t d0 = x.shape[1], d1 = h1.shape[1], d2 = h2.shape[1], d3 = dout.shape[1]

    dw1_arr = np.zeros((d1, d0), dtype=np.float64)
    db1_arr = np.zeros(d1, dtype=np.float64)
    dw2_arr = np.zeros((d2, d1), dtype=np.float64)
    db2_arr = np.zeros(d2, dtype=np.float64)
    dw3_arr = np.zeros((d3, d2), dtype=np.float64)
    db3_arr = np.zeros(d3, dtype=np.float64)
    dz2_arr = np.empty((n, d2), dtype=np.float64)
    dz1_arr = np.empty((n, d1), dtype=np.float64)

    cdef double[:, ::1] dw1 = dw1_arr, dw2 = dw2_arr, dw3 = dw3_arr
    cdef double[::1] db1 = db1_arr, db2 = db2_arr, db3 = db3_arr
    cdef double[:, ::1] dz2 = dz2_arr, dz1 = dz1_arr
    cdef Py_ssize_t i, j, k
    cdef double acc, g

    with nogil:
        for i in range(n):
            for j in range(d3):
                g = dout[i, j]
                db3[j] += g
                for k in range(d2):
                    dw3[j, k] += g * h2[i, k]
            for j in range(d2):
                acc = 0.0
                for k in range(d3):
                    acc += dout[i, k] * w3[k, j]
                g = acc * (1.0 - h2[i, j] * h2[i, j])
                dz2[i, j] = g
                db2[j] += g
                for k in range(d1):
                    dw2[j, k] += g * h1[i, k]
            for j in range(d1):
                acc = 0.0
                for k in range(d2):
                    acc += dz2[i, k] * w2[k, j]
                g = acc * (1.0 - h1[i, j] * h1[i, j])
                dz1[i, j] = g
                db1[j] += g
                for k in range(d0):
                    dw1[j, k] += g * x[i, k]

    return dw1_arr, db1_arr, dw2_arr, db2_arr, dw3_arr, db3_arr


DEF MAX_WIDTH = 64
DEF OBS_DIM = 8
DEF N_ACTIONS = 4


cdef void _dense1(double[:, ::1] w, double[::1] b, double* x, double* out,
                  bint apply_tanh) noexcept nogil:
    cdef Py_ssize_t j, k, fout = w.shape[0], fin = w.shape[1]
    cdef double acc
    for j in range(fout):
        acc = b[j]
        for k in range(fin):
            acc += w[j, k] * x[k]
        out[j] = tanh(acc) if apply_tanh else acc


cdef void _mlp3_1(double[:, ::1] w1, double[::1] b1, double[:, ::1] w2,
                  double[::1] b2, double[:, ::1] w3, double[::1] b3,
                  double* x, double* out) noexcept nogil:
    cdef double h1[MAX_WIDTH]
    cdef double h2[MAX_WIDTH]
    _dense1(w1, b1, x, h1, True)
    _dense1(w2, b2, h1, h2, True)
    _dense1(w3, b3, h2, out, False)


cdef void _build_obs(double[:, ::1] coords_scaled, double[:, ::1] flags,
                     Py_ssize_t cur, Py_ssize_t dst, double* obs) noexcept nogil:
    cdef Py_ssize_t j
    obs[0] = coords_scaled[cur, 0]
    obs[1] = coords_scaled[cur, 1]
    obs[2] = coords_scaled[dst, 0]
    obs[3] = coords_scaled[dst, 1]
    for j in range(N_ACTIONS):
        obs[4 + j] = flags[cur, j]


cdef void _softmax4(double* logits, double* probs) noexcept nogil:
    cdef double mx = logits[0], s = 0.0
    cdef Py_ssize_t j
    for j in range(1, N_ACTIONS):
        if logits[j] > mx:
            mx = logits[j]
    for j in range(N_ACTIONS):
        probs[j] = exp(logits[j] - mx)
        s += probs[j]
    for j in range(N_ACTIONS):
        probs[j] /= s


def rollout_episode(actor, critic,
                    int[:, ::1] adjacency, double[:, ::1] flags,
                    double[:, ::1] coords_scaled, unsigned char[::1] fault_mask,
                    Py_ssize_t src, Py_ssize_t dst, Py_ssize_t max_steps,
                    double[::1] uniforms,
                    double[:, ::1] obs_out, long long[::1] act_out,
                    double[::1] logp_out, double[::1] rew_out, double[::1] val_out):
    """Run one training episode; returns (steps, terminated, reached, bootstrap).

    Mirrors RoutingEnv.step semantics exactly; one uniform is consumed per
    step for action sampling.
    """
    cdef double[:, ::1] aw1 = actor[0][0], aw2 = actor[1][0], aw3 = actor[2][0]
    cdef double[::1] ab1 = actor[0][1], ab2 = actor[1][1], ab3 = actor[2][1]
    cdef double[:, ::1] cw1 = critic[0][0], cw2 = critic[1][0], cw3 = critic[2][0]
    cdef double[::1] cb1 = critic[0][1], cb2 = critic[1][1], cb3 = critic[2][1]

    cdef double obs[OBS_DIM]
    cdef double logits[N_ACTIONS]
    cdef double probs[N_ACTIONS]
    cdef double value[1]
    cdef Py_ssize_t t = 0, j, a, cur = src, nxt
    cdef double u, acc, bootstrap = 0.0
    cdef bint terminated = False, reached = False

    with nogil:
        while t < max_steps:
            _build_obs(coords_scaled, flags, cur, dst, obs)
            _mlp3_1(aw1, ab1, aw2, ab2, aw3, ab3, obs, logits)
            _softmax4(logits, probs)
            _mlp3_1(cw1, cb1, cw2, cb2, cw3, cb3, obs, value)

            u = uniforms[t]
            acc = 0.0
            a = N_ACTIONS - 1
            for j in range(N_ACTIONS):
                acc += probs[j]
                if u < acc:
                    a = j
                    break

            for j in range(OBS_DIM):
                obs_out[t, j] = obs[j]
            act_out[t] = a
            logp_out[t] = log(probs[a])
            val_out[t] = value[0]

            nxt = adjacency[cur, a]
            if nxt == dst:
                rew_out[t] = 100.0
                terminated = True
                reached = True
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
            _build_obs(coords_scaled, flags, cur, dst, obs)
            _mlp3_1(cw1, cb1, cw2, cb2, cw3, cb3, obs, value)
            bootstrap = value[0]

    return t, bool(terminated), bool(reached), bootstrap


def policy_route(actor,
                 int[:, ::1] adjacency, double[:, ::1] flags,
                 double[:, ::1] coords_scaled, unsigned char[::1] fault_mask,
                 Py_ssize_t src, Py_ssize_t dst, Py_ssize_t max_steps,
                 long long[::1] path_out):
    """Argmax deployment of the policy; returns (status, hops, path_len).

    status: 0 = delivered, 1 = stepped into a fault, 2 = hop budget exceeded.
    Ties go to the lowest action index, matching numpy argmax.
    """
    cdef double[:, ::1] aw1 = actor[0][0], aw2 = actor[1][0], aw3 = actor[2][0]
    cdef double[::1] ab1 = actor[0][1], ab2 = actor[1][1], ab3 = actor[2][1]
    cdef double obs[OBS_DIM]
    cdef double logits[N_ACTIONS]
    cdef Py_ssize_t cur = src, nxt, a, j, hops = 0, plen = 1
    cdef int status = 2

    path_out[0] = src
    with nogil:
        while hops < max_steps:
            _build_obs(coords_scaled, flags, cur, dst, obs)
            _mlp3_1(aw1, ab1, aw2, ab2, aw3, ab3, obs, logits)
            a = 0
            for j in range(1, N_ACTIONS):
                if logits[j] > logits[a]:
                    a = j
            nxt = adjacency[cur, a]
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


def gae_scan(double[::1] rewards, double[::1] values,
             double gamma, double lam, double bootstrap_value):
    """Generalized advantage estimation over one episode (see numpy twin)."""
    cdef Py_ssize_t T = rewards.shape[0]
    adv_arr = np.empty(T, dtype=np.float64)
    ret_arr = np.empty(T, dtype=np.float64)
    cdef double[::1] adv = adv_arr, ret = ret_arr
    cdef double next_v = bootstrap_value, acc = 0.0, delta
    cdef Py_ssize_t i
    for i in range(T - 1, -1, -1):
        delta = rewards[i] + gamma * next_v - values[i]
        acc = delta + gamma * lam * acc
        adv[i] = acc
        ret[i] = acc + values[i]
        next_v = values[i]
    return adv_arr, ret_arr
