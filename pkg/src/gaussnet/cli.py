"""Command-line entry point.

Commands: topology, train, route, demo, sweep-pdr, sweep-throughput, quadrant.
Parameter precedence: built-in defaults, then the JSON --config file (flat
keys named like the long flags with dashes replaced by underscores), then
explicit command-line flags.  Every command that writes an output directory
drops the fully resolved configuration (with the tool version) there, and
flags partial output with a `.incomplete` marker while running.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from . import __version__
from .env import OBS_DIM
from .experiments import (
    DEFAULT_DENSITIES,
    DEFAULT_LOADS,
    SWEEP_PPO,
    DetourReport,
    SweepConfig,
    detour_demo,
    quadrant_study,
    run_pdr_sweep,
    run_throughput_sweep,
)
from .faults import CLUSTERED, UNIFORM, FaultSpec, fault_set_nodes_from_csv, generate_faults
from .gaussian import GaussianInt, NetworkModulus, build_topology, quadrant_of
from .ppo import PPOConfig, PolicyRouter, load_params, save_params, train
from .routing import route_greedy
from .seeding import derive_seed
from .svgchart import Series, write_line_chart

PROG = "gaussnet"


def fmt(x) -> str:
    """CSV number formatting: 6 significant digits."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.6g}"


def _parse_range(text: str) -> tuple[float, ...]:
    """'0:0.4:0.05' (inclusive) or '0.1,0.2,0.3' or a single number."""
    text = text.strip()
    if ":" in text:
        start, stop, step = (float(v) for v in text.split(":"))
        n = int(round((stop - start) / step)) + 1
        return tuple(round(start + i * step, 10) for i in range(n))
    return tuple(float(v) for v in text.split(","))


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog=PROG,
        description="Gaussian interconnection network routing simulator",
        epilog="Precedence: defaults < --config JSON (keys = flag names, "
               "underscores for dashes) < command-line flags.",
    )
    p.add_argument("--version", action="version", version=f"{PROG} {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, help="modulus k + (k+1)i (default 3)")
    common.add_argument("--alpha", type=str, help="explicit modulus 'a+bi' (overrides --k)")
    common.add_argument("--seed", type=int, help="master seed (default 0)")
    common.add_argument("--out", type=str, help="output directory (or file for topology)")
    common.add_argument("--config", type=str, help="JSON config file")
    common.add_argument("--jobs", type=int, help="parallel workers (default: CPU count)")

    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("topology", parents=[common], help="dump the node/adjacency table as CSV")

    tp = sub.add_parser("train", parents=[common], help="train a policy, save params + reward curve")
    tp.add_argument("--episodes", type=int, help="training episodes (default 500)")
    tp.add_argument("--density", type=float, help="fault density during training (default 0.1)")
    tp.add_argument("--fault-mode", choices=[UNIFORM, CLUSTERED], help="fault model (default uniform)")
    tp.add_argument("--cluster-sigma", type=float, help="clustered mode kernel width (default 1.0)")
    tp.add_argument("--num-clusters", type=int, help="clustered mode seed count (default 1)")
    tp.add_argument("--lr", type=float, help="learning rate (default 1e-3)")
    tp.add_argument("--epsilon-greedy", action="store_true", default=None,
                    help="enable the decayed random-action overlay")

    rp = sub.add_parser("route", parents=[common], help="route one packet and print the hop trace")
    rp.add_argument("--policy", choices=["greedy", "rl"], default="greedy")
    rp.add_argument("--src", type=int, required=True)
    rp.add_argument("--dst", type=int, required=True)
    rp.add_argument("--params", type=str, help="policy parameter file (required for --policy rl)")
    rp.add_argument("--density", type=float, help="generate faults at this density (default 0)")
    rp.add_argument("--fault-mode", choices=[UNIFORM, CLUSTERED])
    rp.add_argument("--cluster-sigma", type=float)
    rp.add_argument("--num-clusters", type=int)
    rp.add_argument("--faults", type=str, help="CSV file of faulty node indices")
    rp.add_argument("--distance-mode", choices=["plain", "modular"], help="greedy metric (default plain)")

    dp = sub.add_parser("demo", parents=[common], help="single-fault detour comparison (0 -> 3)")
    dp.add_argument("--episodes", type=int, help="demo policy training episodes (default 8000)")

    sp = sub.add_parser("sweep-pdr", parents=[common], help="PDR and adaptive score vs fault density")
    sp.add_argument("--densities", type=str, help="range 'start:stop:step' or list (default 0:0.4:0.05)")
    sp.add_argument("--trials", type=int, help="trials per density (default 20)")
    sp.add_argument("--packets", type=int, help="packets per trial (default 200)")
    sp.add_argument("--episodes", type=int, help="policy training episodes (default 20000)")
    sp.add_argument("--fault-mode", choices=[UNIFORM, CLUSTERED])
    sp.add_argument("--cluster-sigma", type=float)
    sp.add_argument("--num-clusters", type=int)

    hp = sub.add_parser("sweep-throughput", parents=[common], help="normalized throughput vs load")
    hp.add_argument("--density", type=float, help="fault density of the sweep (default 0.2)")
    hp.add_argument("--loads", type=str, help="range or list (default 0.1:0.9:0.1)")
    hp.add_argument("--trials", type=int)
    hp.add_argument("--packets", type=int)
    hp.add_argument("--episodes", type=int)
    hp.add_argument("--beta", type=float, help="fixed decay coefficient (skips calibration)")
    hp.add_argument("--no-calibrate", action="store_true", default=None,
                    help="use the default beta instead of calibrating to the reference anchors")

    qp = sub.add_parser("quadrant", parents=[common], help="quadrant-I average distance study")
    qp.add_argument("--fault-counts", type=str, help="list, default '1,2,3'")
    qp.add_argument("--trials", type=int, help="trials per fault count (default 200)")
    qp.add_argument("--episodes", type=int)

    return p


def _resolve(args: argparse.Namespace) -> dict:
    """defaults <- config file <- explicit flags."""
    resolved: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            file_cfg = json.load(fh)
        if not isinstance(file_cfg, dict):
            raise ValueError("--config must contain a JSON object")
        resolved.update(file_cfg)
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        resolved[key] = value
    resolved.setdefault("seed", 0)
    resolved.setdefault("jobs", os.cpu_count() or 1)
    resolved.setdefault("k", 3)
    return resolved


def _modulus(cfg: dict) -> NetworkModulus:
    if cfg.get("alpha"):
        return NetworkModulus.create(GaussianInt.parse(cfg["alpha"]))
    return NetworkModulus.from_k(int(cfg["k"]))


def _out_dir(cfg: dict, command: str) -> Path:
    out = Path(cfg.get("out") or f"{PROG}-{command}-out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_run_config(out: Path, command: str, cfg: dict) -> None:
    doc = {"tool": PROG, "version": __version__, "command": command}
    doc.update({k: v for k, v in sorted(cfg.items()) if k != "out"})
    (out / "run_config.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


class _Incomplete:
    """Marker file present while a command is writing its outputs."""

    def __init__(self, out: Path):
        self.path = out / ".incomplete"

    def __enter__(self):
        self.path.write_text("run in progress or aborted\n")
        return self

    def __exit__(self, exc_type, *_):
        if exc_type is None:
            self.path.unlink(missing_ok=True)
        return False


def _fault_spec_from(cfg: dict, density_key: str = "density", default_density: float = 0.0) -> FaultSpec:
    return FaultSpec(
        mode=cfg.get("fault_mode", UNIFORM),
        density=float(cfg.get(density_key, default_density)),
        seed=derive_seed(int(cfg["seed"]), "cli-faults"),
        cluster_sigma=float(cfg.get("cluster_sigma", 1.0)),
        num_clusters=int(cfg.get("num_clusters", 1)),
    )


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_topology(cfg: dict) -> int:
    t = build_topology(_modulus(cfg))
    lines = ["node_index,re,im,n_up,n_down,n_right,n_left,quadrant"]
    for c in range(t.n_nodes):
        x, y = t.centered_coords[c]
        n = t.neighbors(c)
        lines.append(f"{c},{x},{y},{n[0]},{n[1]},{n[2]},{n[3]},{quadrant_of(c, t).value}")
    text = "\n".join(lines) + "\n"
    if cfg.get("out"):
        Path(cfg["out"]).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_train(cfg: dict) -> int:
    m = _modulus(cfg)
    t = build_topology(m)
    seed = int(cfg["seed"])
    ppo = PPOConfig(
        episodes=int(cfg.get("episodes", 500)),
        learning_rate=float(cfg.get("lr", PPOConfig().learning_rate)),
        seed=seed,
    )
    if cfg.get("epsilon_greedy"):
        ppo = replace(ppo, epsilon_greedy=replace(ppo.epsilon_greedy, enabled=True))
    spec = _fault_spec_from(cfg, default_density=0.1)

    out = _out_dir(cfg, "train")
    with _Incomplete(out):
        report = train(t, spec, ppo)
        save_params(report.params, out / "params.json", modulus=m, config=ppo, master_seed=seed)
        rows = ["episode,return,smoothed"]
        rows += [
            f"{i},{fmt(r)},{fmt(s)}"
            for i, (r, s) in enumerate(zip(report.episode_returns, report.smoothed_returns))
        ]
        (out / "reward_curve.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
        episodes = np.arange(len(report.episode_returns))
        write_line_chart(
            out / "reward_curve.svg",
            [Series("per-episode", episodes, report.episode_returns),
             Series("smoothed (20)", episodes, report.smoothed_returns)],
            title="Training reward",
            xlabel="episode", ylabel="return",
        )
        _write_run_config(out, "train", cfg | {"ppo": asdict(ppo)})
    print(f"trained {ppo.episodes} episodes in {report.wall_seconds:.1f}s -> {out}")
    return 0


def cmd_route(cfg: dict) -> int:
    t = build_topology(_modulus(cfg))
    src, dst = int(cfg["src"]), int(cfg["dst"])
    if cfg.get("faults"):
        nodes = fault_set_nodes_from_csv(Path(cfg["faults"]).read_text(encoding="utf-8"))
        faults = frozenset(nodes)
    else:
        faults = generate_faults(t, _fault_spec_from(cfg)).nodes
    if cfg.get("policy", "greedy") == "rl":
        if not cfg.get("params"):
            raise ValueError("--policy rl requires --params FILE")
        params, _ = load_params(cfg["params"])
        result = PolicyRouter(t, params, faults).route(src, dst)
    else:
        result = route_greedy(t, src, dst, faults, cfg.get("distance_mode", "plain"))

    print("step,node_index,re,im")
    for step, node in enumerate(result.path):
        x, y = t.centered_coords[node]
        print(f"{step},{node},{x},{y}")
    print(f"# status={result.status.value} hops={result.hops}")
    return 0 if result.delivered else 1


def _demo_text(report: DetourReport, t) -> str:
    lines = [f"baseline (no faults): greedy {report.baseline_greedy.hops} hops, "
             f"policy {report.baseline_rl.hops} hops"]
    for p in report.improvements:
        lines.append(
            f"fault at node {p.fault_node} ({t.coord(p.fault_node)}): "
            f"greedy {p.greedy_hops} hops via {p.greedy_path}, "
            f"policy {p.rl_hops} hops via {p.rl_path} (BFS optimum {p.bfs_hops})"
        )
    if report.five_vs_four:
        p = report.five_vs_four[0]
        lines.append(f"five-vs-four case: fault at node {p.fault_node}")
    else:
        lines.append("five-vs-four case: not found")
    return "\n".join(lines) + "\n"


def cmd_demo(cfg: dict) -> int:
    t = build_topology(_modulus(cfg))
    ppo = replace(SWEEP_PPO, episodes=int(cfg.get("episodes", 8000)))
    out = _out_dir(cfg, "demo")
    with _Incomplete(out):
        report = detour_demo(t, master_seed=int(cfg["seed"]), ppo=ppo)
        rows = ["fault_node,greedy_hops,rl_hops,bfs_hops"]
        rows += [
            f"{p.fault_node},{p.greedy_hops},{p.rl_hops},{p.bfs_hops}"
            for p in report.placements
        ]
        (out / "demo_scan.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
        (out / "demo_traces.txt").write_text(_demo_text(report, t), encoding="utf-8")
        _write_run_config(out, "demo", cfg)
    sys.stdout.write(_demo_text(report, t))
    return 0


def _sweep_config(cfg: dict) -> SweepConfig:
    kw = dict(
        k=int(cfg["k"]),
        master_seed=int(cfg["seed"]),
        jobs=int(cfg["jobs"]),
        fault_mode=cfg.get("fault_mode", UNIFORM),
        cluster_sigma=float(cfg.get("cluster_sigma", 1.0)),
        num_clusters=int(cfg.get("num_clusters", 1)),
    )
    if cfg.get("densities"):
        kw["densities"] = _parse_range(str(cfg["densities"]))
    if cfg.get("loads"):
        kw["loads"] = _parse_range(str(cfg["loads"]))
    if cfg.get("trials"):
        kw["trials_per_density"] = int(cfg["trials"])
    if cfg.get("packets"):
        kw["packets_per_trial"] = int(cfg["packets"])
    if cfg.get("beta"):
        kw["beta"] = float(cfg["beta"])
    if cfg.get("alpha"):
        m = _modulus(cfg)
        if m.alpha.im != m.alpha.re + 1:
            raise ValueError("sweeps accept --k (alpha = k+(k+1)i) moduli only")
        kw["k"] = m.alpha.re
    return SweepConfig(**kw)


def _sweep_ppo(cfg: dict) -> PPOConfig | None:
    if cfg.get("episodes"):
        return replace(SWEEP_PPO, episodes=int(cfg["episodes"]))
    return None


def _write_provenance(out: Path, trial_records) -> None:
    doc = [
        {
            "density": r.density, "policy": r.policy, "trial": r.trial,
            "fault_nodes": list(r.fault_nodes),
            "pairs": [list(p) for p in r.pairs],
            "reachable_fraction": r.reachable_fraction,
        }
        for r in trial_records
    ]
    (out / "provenance.json").write_text(json.dumps(doc) + "\n", encoding="utf-8")


def cmd_sweep_pdr(cfg: dict) -> int:
    sweep = _sweep_config(cfg)
    out = _out_dir(cfg, "sweep-pdr")
    with _Incomplete(out):
        trials, metrics = run_pdr_sweep(sweep, ppo=_sweep_ppo(cfg))

        raw = ["density,policy,trial,pdr,mean_hops,n_delivered,n_packets"]
        raw += [
            f"{fmt(r.density)},{r.policy},{r.trial},{fmt(r.pdr)},{fmt(r.mean_hops)},"
            f"{r.n_delivered},{r.n_packets}"
            for r in trials
        ]
        (out / "pdr_raw.csv").write_text("\n".join(raw) + "\n", encoding="utf-8")

        agg = ["density,policy,pdr_mean,pdr_stderr,adaptive_score"]
        agg += [
            f"{fmt(m.density)},{m.policy},{fmt(m.pdr_mean)},{fmt(m.pdr_stderr)},"
            f"{fmt(m.adaptive_score)}"
            for m in metrics
        ]
        (out / "pdr_aggregate.csv").write_text("\n".join(agg) + "\n", encoding="utf-8")
        _write_provenance(out, trials)

        for field_name, fname, ylabel in (
            ("pdr_mean", "pdr_vs_density.svg", "packet delivery ratio"),
            ("adaptive_score", "adaptive_score.svg", "fault adaptive score"),
        ):
            series = []
            for policy, dashed in (("rl", False), ("greedy", True)):
                pts = [(m.density, getattr(m, field_name)) for m in metrics
                       if m.policy == policy and getattr(m, field_name) is not None]
                series.append(Series(policy, [p[0] for p in pts], [p[1] for p in pts], dashed=dashed))
            write_line_chart(out / fname, series, title=ylabel.title(),
                             xlabel="fault density", ylabel=ylabel, y_min=0.0, y_max=1.05)
        _write_run_config(out, "sweep-pdr", cfg)
    print(f"sweep complete -> {out}")
    return 0


def cmd_sweep_throughput(cfg: dict) -> int:
    sweep = _sweep_config(cfg)
    out = _out_dir(cfg, "sweep-throughput")
    calibrate = not (cfg.get("no_calibrate") or cfg.get("beta"))
    with _Incomplete(out):
        trials, records, beta = run_throughput_sweep(
            sweep,
            density=float(cfg.get("density", 0.2)),
            ppo=_sweep_ppo(cfg),
            calibrate=calibrate,
        )
        rows = ["load,policy,throughput_mean,throughput_stderr"]
        rows += [
            f"{fmt(r.load)},{r.policy},{fmt(r.throughput_mean)},{fmt(r.throughput_stderr)}"
            for r in records
        ]
        (out / "throughput.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
        _write_provenance(out, trials)

        series = []
        for policy, dashed in (("rl", False), ("greedy", True)):
            pts = [(r.load, r.throughput_mean) for r in records if r.policy == policy]
            series.append(Series(policy, [p[0] for p in pts], [p[1] for p in pts], dashed=dashed))
        write_line_chart(out / "throughput_vs_load.svg", series,
                         title="Normalized Throughput vs Network Load",
                         xlabel="network load", ylabel="normalized throughput", y_min=0.0)
        _write_run_config(out, "sweep-throughput", cfg | {"beta_used": beta})
    print(f"throughput sweep complete (beta={beta:.4g}) -> {out}")
    return 0


def cmd_quadrant(cfg: dict) -> int:
    t = build_topology(_modulus(cfg))
    counts = tuple(int(v) for v in str(cfg.get("fault_counts", "1,2,3")).split(","))
    out = _out_dir(cfg, "quadrant")
    with _Incomplete(out):
        records = quadrant_study(
            t, fault_counts=counts, trials=int(cfg.get("trials", 200)),
            master_seed=int(cfg["seed"]), ppo=_sweep_ppo(cfg), jobs=int(cfg["jobs"]),
        )
        rows = ["fault_count,policy,avg_hops,delivery_rate,trials"]
        rows += [
            f"{r.fault_count},{r.policy},{fmt(r.avg_hops)},{fmt(r.delivery_rate)},{r.trials}"
            for r in records
        ]
        (out / "quadrant.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
        _write_run_config(out, "quadrant", cfg)
    for r in records:
        print(f"faults={r.fault_count} {r.policy:6s} avg_hops={fmt(r.avg_hops)} "
              f"delivery_rate={fmt(r.delivery_rate)}")
    return 0


_COMMANDS = {
    "topology": cmd_topology,
    "train": cmd_train,
    "route": cmd_route,
    "demo": cmd_demo,
    "sweep-pdr": cmd_sweep_pdr,
    "sweep-throughput": cmd_sweep_throughput,
    "quadrant": cmd_quadrant,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _resolve(args)
        return _COMMANDS[args.command](cfg)
    except (ValueError, OSError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
