"""Command-line front end: single runs, seed batches, partition inspection
and the live session service.

Subcommands: run | batch | egp | serve.  The PURSUIT_LOG environment
variable sets the log level (DEBUG, INFO, WARNING, ...).
"""
from __future__ import annotations

import argparse
import concurrent.futures
import csv
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, asdict

import numpy as np

from . import partition as _part
from .scenario import ScenarioError, load_scenario
from .sim import Game, Outcome, ScenarioConfig, SimError, StepRecord

log = logging.getLogger("pursuit")

TRAJECTORY_COLUMNS = ["t", "agent_id", "role", "x", "y", "ux", "uy"]
METRICS_COLUMNS = ["t", "min_pursuer_dist", "hull_signed_dist_assigned",
                   "hull_signed_dist_all", "encircled", "captured"]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_trajectory_csv(path: str, records: list[StepRecord]) -> None:
    """One row per agent per tick; ux,uy are the controls applied in the
    step that produced the row's positions (zero at t=0)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRAJECTORY_COLUMNS)
        for rec in records:
            for i, (p, u) in enumerate(zip(rec.pursuers, rec.pursuer_controls)):
                w.writerow([rec.t, i, "pursuer", _fmt(p[0]), _fmt(p[1]),
                            _fmt(u[0]), _fmt(u[1])])
            n = rec.pursuers.shape[0]
            w.writerow([rec.t, n, "evader",
                        _fmt(rec.evader[0]), _fmt(rec.evader[1]),
                        _fmt(rec.evader_control[0]), _fmt(rec.evader_control[1])])


def write_metrics_csv(path: str, records: list[StepRecord]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(METRICS_COLUMNS)
        for rec in records:
            w.writerow([rec.t, _fmt(rec.min_pursuer_distance),
                        _fmt(rec.hull_signed_distance_assigned),
                        _fmt(rec.hull_signed_distance_all),
                        int(rec.encircled), int(rec.captured)])


@dataclass
class RunReport:
    outcome: str
    outcome_t: int
    capture_time: int | None
    encirclement_violations: int
    min_hull_signed_dist_all: float
    min_hull_signed_dist_assigned: float
    min_pursuer_dist_final: float
    min_pursuer_dist_min: float
    steps: int
    policy: str
    evader_policy: str
    seed: int
    wall_time_s: float
    error: str | None = None


def summarize_run(cfg: ScenarioConfig, outcome: Outcome,
                  records: list[StepRecord], wall: float) -> RunReport:
    return RunReport(
        outcome=outcome.kind,
        outcome_t=outcome.t,
        capture_time=outcome.t if outcome.kind == "captured" else None,
        encirclement_violations=sum(
            1 for r in records if r.hull_signed_distance_all < 0),
        min_hull_signed_dist_all=min(
            r.hull_signed_distance_all for r in records),
        min_hull_signed_dist_assigned=min(
            r.hull_signed_distance_assigned for r in records),
        min_pursuer_dist_final=records[-1].min_pursuer_distance,
        min_pursuer_dist_min=min(r.min_pursuer_distance for r in records),
        steps=records[-1].t,
        policy=cfg.pursuer_policy,
        evader_policy=cfg.evader_policy,
        seed=cfg.seed,
        wall_time_s=wall,
    )


def _load_cfg(args) -> ScenarioConfig:
    overrides = list(args.set or [])
    if getattr(args, "policy", None):
        overrides.append(f"policy={args.policy}")
    if getattr(args, "evader", None):
        overrides.append(f"evader_policy={args.evader}")
    return load_scenario(args.scenario, overrides)


def cmd_run(args) -> int:
    cfg = _load_cfg(args)
    t0 = time.perf_counter()
    try:
        game = Game(cfg)
        outcome = game.run()
    except SimError as err:
        print(f"simulation error: {err}", file=sys.stderr)
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            with open(os.path.join(args.out, "report.json"), "w") as fh:
                json.dump({"error": str(err)}, fh, indent=2)
        return 1
    report = summarize_run(cfg, outcome, game.records,
                           time.perf_counter() - t0)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        write_trajectory_csv(os.path.join(args.out, "trajectory.csv"),
                             game.records)
        write_metrics_csv(os.path.join(args.out, "metrics.csv"), game.records)
        with open(os.path.join(args.out, "report.json"), "w") as fh:
            json.dump(asdict(report), fh, indent=2)
            fh.write("\n")
    print(f"{report.outcome} t={report.outcome_t} "
          f"violations={report.encirclement_violations} "
          f"min_hull_dist={report.min_hull_signed_dist_all:.3f}")
    return 0


def _batch_worker(task) -> dict:
    cfg_fields, policy, seed = task
    cfg = ScenarioConfig(**cfg_fields, pursuer_policy=policy, seed=seed)
    t0 = time.perf_counter()
    egp_ok = True
    try:
        game = Game(cfg)
        outcome = game.run()
    except (_part.PartitionError, SimError) as err:
        return {"policy": policy, "seed": seed, "error": str(err),
                "egp_ok": isinstance(err, SimError)}
    rep = summarize_run(cfg, outcome, game.records, time.perf_counter() - t0)
    return {"policy": policy, "seed": seed, "error": None, "egp_ok": egp_ok,
            "outcome": rep.outcome, "t": rep.outcome_t,
            "violations": rep.encirclement_violations}


def _random_init_fields(base: dict, seed: int, box: float = 5.0) -> dict:
    """Pursuer positions uniform in a box around the evader, resampled
    until the evader starts inside the hull."""
    from .geom2d import DegenerateInput, convex_hull, hull_contains

    rng = np.random.default_rng(seed)
    n = np.atleast_2d(base["pursuer_init"]).shape[0]
    fields = dict(base)
    for _ in range(10_000):
        P = rng.uniform(-box, box, size=(n, 2))
        try:
            ok, _ = hull_contains(convex_hull(P), np.zeros(2))
        except DegenerateInput:
            continue
        if ok:
            fields["pursuer_init"] = P
            fields["evader_init"] = np.zeros(2)
            return fields
    raise SimError("could not sample an encircling configuration")


def cmd_batch(args) -> int:
    cfg = _load_cfg(args)
    base = {
        "pursuer_init": cfg.pursuer_init, "evader_init": cfg.evader_init,
        "u_p_max": cfg.u_p_max, "u_e_max": cfg.u_e_max, "r_c": cfg.r_c,
        "M": cfg.M, "K": cfg.K, "Q": cfg.Q, "R": cfg.R, "P": cfg.P,
        "max_steps": cfg.max_steps, "evader_policy": cfg.evader_policy,
        "voronoi_margin": cfg.voronoi_margin, "egp_eps": cfg.egp_eps,
    }
    policies = args.policies.split(",")
    tasks = []
    for policy in policies:
        for seed in range(args.seeds):
            fields = (_random_init_fields(base, seed)
                      if args.random_inits else dict(base))
            tasks.append((fields, policy.strip(), seed))
    results: list[dict] = []
    if args.jobs == 1:
        results = [_batch_worker(t) for t in tasks]
    else:
        with concurrent.futures.ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_batch_worker, tasks))
    results.sort(key=lambda r: (r["policy"], r["seed"]))

    rows = []
    for policy in sorted({p.strip() for p in policies}):
        rs = [r for r in results if r["policy"] == policy]
        ok = [r for r in rs if r["error"] is None]
        captures = [r for r in ok if r["outcome"] == "captured"]
        violated = [r for r in ok if r["violations"] > 0]
        rows.append({
            "policy": policy,
            "seeds": len(rs),
            "completed": len(ok),
            "capture_rate": len(captures) / len(rs) if rs else 0.0,
            "violation_rate": len(violated) / len(rs) if rs else 0.0,
            "mean_capture_time": (
                sum(r["t"] for r in captures) / len(captures)
                if captures else float("nan")),
            "egp_success_rate": (
                sum(1 for r in rs if r["egp_ok"]) / len(rs) if rs else 0.0),
        })
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "aggregate.csv"), "w",
                  newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
            w.writeheader()
            w.writerows(rows)
        with open(os.path.join(args.out, "runs.json"), "w") as fh:
            json.dump(results, fh, indent=2)
            fh.write("\n")
    for row in rows:
        print(f"{row['policy']}: seeds={row['seeds']} "
              f"capture_rate={row['capture_rate']:.2f} "
              f"violation_rate={row['violation_rate']:.2f} "
              f"mean_capture_time={row['mean_capture_time']:.1f} "
              f"egp_success_rate={row['egp_success_rate']:.2f}")
    return 0


def cmd_egp(args) -> int:
    cfg = _load_cfg(args)
    ra = _part.relative_angles(cfg.pursuer_init, cfg.evader_init)
    try:
        selected = _part.select_subset(ra, cfg.M)
        part = _part.construct_egp(ra, selected, eps=cfg.egp_eps)
    except _part.PartitionError as err:
        print(f"no EGP exists: {err}", file=sys.stderr)
        return 1
    bounds = part.boundaries()
    print(f"theta_bar = {part.start_angle:.6f}")
    print("theta     = " + " ".join(f"{t:.6f}" for t in part.angles))
    print("rays      = " + " ".join(f"{b:.6f}" for b in bounds[:-1]))
    for i in selected:
        x = cfg.pursuer_init[i] - cfg.evader_init
        print(f"pursuer {i}: angle={np.arctan2(x[1], x[0]) % (2 * np.pi):.6f} "
              f"sector={part.sector_of_point(x)}")
    free = [i for i in range(cfg.n_pursuers) if i not in selected]
    if free:
        print("unassigned: " + " ".join(str(i) for i in free))
    return 0


def cmd_serve(args) -> int:
    from . import service

    cfg = _load_cfg(args)
    if cfg.evader_policy != "external":
        cfg.evader_policy = "external"
    host, _, port = args.bind.rpartition(":")
    if not host or not port.isdigit():
        print(f"bad bind address {args.bind!r}, expected host:port",
              file=sys.stderr)
        return 1
    try:
        service.serve(cfg, host, int(port), tick_rate=args.tick_rate)
    except OSError as err:
        print(f"cannot bind {args.bind}: {err}", file=sys.stderr)
        return 1
    return 0


def _add_common(p: argparse.ArgumentParser, policy_flags: bool = True) -> None:
    p.add_argument("--scenario", required=True,
                   help="scenario file path or bundled scenario name")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override a scenario key (repeatable)")
    if policy_flags:
        p.add_argument("--policy", help="pursuer team policy override")
        p.add_argument("--evader", help="evader policy override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pursuit",
        description="Cooperative pursuit simulations with guaranteed "
                    "encirclement.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one game and write its records")
    _add_common(p)
    p.add_argument("--out", help="output directory for CSV/JSON records")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("batch", help="Monte-Carlo over seeds and policies")
    _add_common(p, policy_flags=False)
    p.add_argument("--evader", help="evader policy override")
    p.add_argument("--policies", default="tmpc,voronoi,direct_charge",
                   help="comma-separated team policies to compare")
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--out", help="output directory for aggregate CSV")
    p.add_argument("--random-inits", action="store_true",
                   help="sample encircling pursuer inits in [-5,5]^2 per seed")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("egp", help="print the partition for a scenario")
    _add_common(p)
    p.set_defaults(func=cmd_egp)

    p = sub.add_parser("serve", help="run the live session service")
    _add_common(p)
    p.add_argument("--bind", default="127.0.0.1:7757", metavar="HOST:PORT")
    p.add_argument("--tick-rate", type=float, default=10.0,
                   help="ticks per second; 0 means lockstep (one tick per "
                        "client action)")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=getattr(logging, os.environ.get("PURSUIT_LOG", "WARNING").upper(),
                      logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as err:
        print(f"scenario error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
