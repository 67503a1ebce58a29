#!/usr/bin/env python3
"""Sweep the feedback coefficient, observation window, and target-sync period
for one learning seat (the full grid the training curves are drawn from)."""

import argparse

from beergame.harness import Campaign, run_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scenario", default="basic")
    ap.add_argument("--role", type=int, default=0)
    ap.add_argument("--episodes", type=int, default=5000)
    ap.add_argument("--beta", type=float, nargs="+", default=[5, 10, 20, 50, 100, 200])
    ap.add_argument("--m", type=int, nargs="+", default=[5, 10])
    ap.add_argument("--c-sync", type=int, nargs="+", default=[5000, 10000])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="runs/beta_sweep")
    ap.add_argument("--force", action="store_true")
    args = ap.parse_args()

    campaign = Campaign(
        scenario=args.scenario,
        role=args.role,
        episodes=args.episodes,
        betas=tuple(args.beta),
        ms=tuple(args.m),
        c_syncs=tuple(args.c_sync),
        seed=args.seed,
    )
    summary = run_experiment(campaign, args.out, force=args.force)
    for row in sorted(summary, key=lambda r: r["dqn_cost"]):
        print(
            f"beta={row['beta']:<6g} m={row['m']:<3d} C={row['C']:<6d} "
            f"cost {row['dqn_cost']:9.2f}  gap {row['gap_pct']:+7.2f}%"
        )


if __name__ == "__main__":
    main()
