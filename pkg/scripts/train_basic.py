#!/usr/bin/env python3
"""Train a DQN seat on the basic scenario against three base-stock co-players.

Desk-scale by default (5000 episodes, ~15 minutes); pass --episodes 60000 for
a full-length run.  Writes the training log, weights, and summary into --out.
"""

import argparse

from beergame.harness import Campaign, run_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--role", type=int, default=0, help="learning seat, 0=retailer")
    ap.add_argument("--episodes", type=int, default=5000)
    ap.add_argument("--beta", type=float, default=50.0)
    ap.add_argument("--m", type=int, default=5)
    ap.add_argument("--c-sync", type=int, default=10_000)
    ap.add_argument("--co-policy", default="basestock", choices=["basestock", "sterman", "random"])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="runs/train_basic")
    ap.add_argument("--force", action="store_true")
    args = ap.parse_args()

    campaign = Campaign(
        scenario="basic",
        role=args.role,
        co_policy=args.co_policy,
        episodes=args.episodes,
        betas=(args.beta,),
        ms=(args.m,),
        c_syncs=(args.c_sync,),
        seed=args.seed,
    )
    summary = run_experiment(campaign, args.out, force=args.force)
    row = summary[0]
    print(
        f"trained cost {row['dqn_cost']:.2f} vs baseline {row['baseline_cost']:.2f} "
        f"(gap {row['gap_pct']:+.2f}%) in {row['wall_seconds']}s -> {args.out}"
    )


if __name__ == "__main__":
    main()
