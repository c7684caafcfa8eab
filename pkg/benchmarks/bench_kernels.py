#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the four hot paths (single-step rollouts, batch forward/backward,
GAE, argmax routing) plus one end-to-end training run per backend.

Usage: python benchmarks/bench_kernels.py [--episodes 2000]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from gaussnet._kernels import available_backends
from gaussnet.experiments import _reach_filtered_sampler
from gaussnet.faults import FaultSpec, inject_uniform
from gaussnet.gaussian import NetworkModulus, build_topology
from gaussnet.ppo import EnvTables, PPOConfig, PolicyParams, train
from gaussnet.seeding import rng_for


def timeit(fn, min_time=0.3):
    fn()  # warm-up
    n = 1
    while True:
        t0 = time.perf_counter()
        for _ in range(n):
            fn()
        dt = time.perf_counter() - t0
        if dt >= min_time:
            return dt / n
        n = max(n + 1, int(n * min_time / max(dt, 1e-9)))


def bench_backend(name, impl, episodes):
    t = build_topology(NetworkModulus.from_k(3))
    params = PolicyParams.initialize(rng_for(0, "bench"))
    faults = inject_uniform(t, FaultSpec(density=0.3, seed=1))
    tables = EnvTables(t, faults)
    rng = rng_for(1, "bench-data")
    results = {}

    x1 = rng.uniform(-1, 1, size=(1, 8))
    x64 = rng.uniform(-1, 1, size=(64, 8))
    a = params.actor
    results["forward batch=1"] = timeit(
        lambda: impl.mlp3_forward(a[0][0], a[0][1], a[1][0], a[1][1], a[2][0], a[2][1], x1))
    results["forward batch=64"] = timeit(
        lambda: impl.mlp3_forward(a[0][0], a[0][1], a[1][0], a[1][1], a[2][0], a[2][1], x64))

    h1, h2, out = (np.asarray(v) for v in impl.mlp3_forward(
        a[0][0], a[0][1], a[1][0], a[1][1], a[2][0], a[2][1], x64))
    dout = rng.normal(size=out.shape)
    results["backward batch=64"] = timeit(
        lambda: impl.mlp3_backward(a[0][0], a[1][0], a[2][0], x64, h1, h2, dout))

    rewards = rng.normal(size=50)
    values = rng.normal(size=50)
    results["gae T=50"] = timeit(lambda: impl.gae_scan(rewards, values, 0.95, 0.92, 0.0))

    uniforms = rng.random(50)
    bufs = (np.empty((50, 8)), np.empty(50, dtype=np.int64),
            np.empty(50), np.empty(50), np.empty(50))
    results["rollout episode"] = timeit(
        lambda: impl.rollout_episode(params.actor, params.critic, tables.adjacency,
                                     tables.flags, tables.coords_scaled, tables.fault_mask,
                                     0, 12, 50, uniforms, *bufs))

    path = np.empty(51, dtype=np.int64)
    results["argmax route"] = timeit(
        lambda: impl.policy_route(params.actor, tables.adjacency, tables.flags,
                                  tables.coords_scaled, tables.fault_mask, 0, 12, 50, path))
    return results


def bench_training(episodes):
    """End-to-end training timing honours the active-backend selection, so we
    re-exec via the environment variable rather than monkeypatching."""
    import os
    import subprocess
    import sys

    code = (
        "import time;"
        "from gaussnet.gaussian import NetworkModulus, build_topology;"
        "from gaussnet.faults import FaultSpec;"
        "from gaussnet.ppo import PPOConfig, train;"
        "t = build_topology(NetworkModulus.from_k(3));"
        f"cfg = PPOConfig(seed=5, episodes={episodes}, learning_rate=1e-3);"
        "spec = FaultSpec(density=0.2, seed=0);"
        "t0 = time.perf_counter(); train(t, spec, cfg);"
        "print(time.perf_counter() - t0)"
    )
    out = {}
    for name, env_val in (("compiled step kernels", ""), ("pure numpy", "1")):
        env = dict(os.environ, GAUSSNET_PURE_PYTHON=env_val)
        res = subprocess.run([sys.executable, "-c", code], capture_output=True,
                             text=True, env=env)
        out[name] = float(res.stdout.strip()) if res.returncode == 0 else float("nan")
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--episodes", type=int, default=2000,
                    help="episodes for the end-to-end training comparison")
    args = ap.parse_args()

    backends = available_backends()
    print(f"available backends: {', '.join(sorted(backends))}\n")

    rows = {}
    for name, impl in sorted(backends.items()):
        rows[name] = bench_backend(name, impl, args.episodes)

    kernels = list(next(iter(rows.values())))
    width = max(len(k) for k in kernels)
    header = f"{'kernel':<{width}}  " + "  ".join(f"{n:>12}" for n in rows)
    print(header)
    print("-" * len(header))
    for k in kernels:
        cells = "  ".join(f"{rows[n][k] * 1e6:>10.1f}us" for n in rows)
        line = f"{k:<{width}}  {cells}"
        if len(rows) == 2:
            speed = rows["python"][k] / rows["cython"][k]
            line += f"   ({speed:.1f}x)"
        print(line)

    if len(backends) == 2:
        print(f"\nend-to-end training ({args.episodes} episodes, density 0.2):")
        timings = bench_training(args.episodes)
        for name, dt in timings.items():
            print(f"  {name}: {dt:.2f}s")
        print(f"  speedup: {timings['pure numpy'] / timings['compiled step kernels']:.2f}x")
        print("  (batch forward/backward always run on numpy/BLAS; the compiled"
              " backend owns the per-step kernels, which dominate rollouts)")


if __name__ == "__main__":
    main()
