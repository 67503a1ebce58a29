"""Command-line entry points: baseline, train, transfer, sweep, trace, serve."""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .env import ROLES
from .harness import (
    Campaign,
    dump_trace,
    run_baseline,
    run_experiment,
    write_delimited,
    write_manifest,
)
from .scenarios import PRESETS, load_scenario


def _add_common(p):
    p.add_argument("--scenario", default="basic", help=f"preset ({', '.join(PRESETS)}) or YAML file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--games", type=int, default=50)
    p.add_argument("--periods", type=int, default=100)


def build_parser():
    parser = argparse.ArgumentParser(prog="beergame", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("baseline", help="simulate analytic policies and report costs")
    _add_common(p)
    p.add_argument("--policy", default=None, help="override every seat (basestock|sterman|random)")

    p = sub.add_parser("train", help="train a DQN seat against analytic co-players")
    _add_common(p)
    p.add_argument("--role", type=int, default=0, choices=range(4), help="learning seat (0=retailer)")
    p.add_argument("--co-policy", default="basestock", choices=["basestock", "sterman", "random"])
    p.add_argument("--episodes", type=int, default=60_000)
    p.add_argument("--beta", type=float, nargs="+", default=[20.0])
    p.add_argument("--m", type=int, nargs="+", default=[10])
    p.add_argument("--c-sync", type=int, nargs="+", default=[10_000])
    p.add_argument("--force", action="store_true", help="overwrite a non-empty output directory")

    p = sub.add_parser("transfer", help="fine-tune a trained network on a new seat/scenario")
    _add_common(p)
    p.add_argument("--role", type=int, default=0, choices=range(4))
    p.add_argument("--co-policy", default="basestock", choices=["basestock", "sterman", "random"])
    p.add_argument("--source-weights", required=True, nargs="+", help="source weight file(s)")
    p.add_argument("--k", type=int, nargs="+", default=[1], help="frozen layer count(s)")
    p.add_argument("--episodes", type=int, default=10_000)
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--force", action="store_true")

    p = sub.add_parser("sweep", help="beta/m/C grid campaign on one scenario")
    _add_common(p)
    p.add_argument("--role", type=int, default=0, choices=range(4))
    p.add_argument("--co-policy", default="basestock", choices=["basestock", "sterman", "random"])
    p.add_argument("--episodes", type=int, default=60_000)
    p.add_argument("--beta", type=float, nargs="+", default=[5, 10, 20, 50, 100, 200])
    p.add_argument("--m", type=int, nargs="+", default=[5, 10])
    p.add_argument("--c-sync", type=int, nargs="+", default=[5_000, 10_000])
    p.add_argument("--force", action="store_true")

    p = sub.add_parser("trace", help="dump one game's per-period per-agent table")
    _add_common(p)
    p.add_argument("--policy", default=None, help="override every seat (basestock|sterman|random)")

    p = sub.add_parser("serve", help="run the live game server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def cmd_baseline(args):
    sc = load_scenario(args.scenario)
    if args.policy:
        sc = sc.with_policies(args.policy)
    report = run_baseline(sc, n_games=args.games, periods=args.periods, seed=args.seed)
    print(f"scenario {report.scenario}  policies {','.join(report.policies)}")
    print(
        f"total cost/game {report.total_per_game:.2f} +/- {report.ci_halfwidth:.2f}  "
        f"(/period {report.total_per_period:.4f})"
    )
    for role, per_period in zip(ROLES, report.per_agent_per_period):
        print(f"  {role:13s} {per_period:10.4f} /period")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_delimited(out / "baseline.csv", [dataclasses.asdict(report)])
        write_manifest(out, sc, args.seed)
    return 0


def cmd_train(args):
    campaign = Campaign(
        scenario=args.scenario,
        role=args.role,
        co_policy=args.co_policy,
        episodes=args.episodes,
        betas=tuple(args.beta),
        ms=tuple(args.m),
        c_syncs=tuple(args.c_sync),
        seed=args.seed,
        n_games=args.games,
        periods=args.periods,
    )
    out = args.out or f"runs/{args.scenario}_{ROLES[args.role]}"
    summary = run_experiment(campaign, out, force=args.force)
    for row in summary:
        print(
            f"beta={row['beta']:<6g} m={row['m']:<3d} C={row['C']:<6d} "
            f"cost {row['dqn_cost']:9.2f}  baseline {row['baseline_cost']:9.2f}  "
            f"gap {row['gap_pct']:+.2f}%"
        )
    print(f"results in {out}")
    return 0


def cmd_transfer(args):
    from .dqn import TrainSchedule
    from .transfer import sweep_rows, transfer_sweep

    sc = load_scenario(args.scenario).with_policies(args.co_policy)
    baseline = run_baseline(
        load_scenario(args.scenario), n_games=args.games, periods=args.periods, seed=args.seed
    )
    schedule = TrainSchedule(
        total_episodes=args.episodes,
        m=args.m,
        validation_games=args.games,
        validation_periods=args.periods,
    )
    sources = {Path(p).stem: p for p in args.source_weights}
    result = transfer_sweep(
        sources, args.role, sc, args.k, schedule,
        baseline_cost=baseline.total_per_game, seed=args.seed,
    )
    for cell in result.table:
        print(
            f"source={cell.source:20s} k={cell.k}  cost {cell.cost:9.2f}  "
            f"gap {cell.gap_pct:+.2f}%  {cell.wall_seconds:.0f}s"
        )
    print(f"best: source={result.best.source} k={result.best.k} cost {result.best.cost:.2f}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_delimited(out / "transfer_sweep.csv", sweep_rows(result))
        write_manifest(out, sc, args.seed)
    return 0


def cmd_sweep(args):
    return cmd_train(args)


def cmd_trace(args):
    sc = load_scenario(args.scenario)
    if args.policy:
        sc = sc.with_policies(args.policy)
    rows = dump_trace(sc, seed=args.seed, periods=args.periods)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_delimited(out / "trace.csv", rows)
        write_manifest(out, sc, args.seed)
        print(f"wrote {len(rows)} rows to {out / 'trace.csv'}")
    else:
        print("period,agent,role,IL,OO,a,r,OUTL")
        for r in rows:
            print(
                f"{r['period']},{r['agent']},{r['role']},{r['IL']},{r['OO']},"
                f"{r['a']},{r['r']},{r['OUTL']}"
            )
    return 0


def cmd_serve(args):
    import uvicorn

    from .server import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


COMMANDS = {
    "baseline": cmd_baseline,
    "train": cmd_train,
    "transfer": cmd_transfer,
    "sweep": cmd_sweep,
    "trace": cmd_trace,
    "serve": cmd_serve,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
