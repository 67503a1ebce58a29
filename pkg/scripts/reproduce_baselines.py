#!/usr/bin/env python3
"""Reproduce the analytic baseline columns: all-base-stock and all-Sterman
costs for every shipped scenario, with 95% confidence intervals."""

import argparse

from beergame.env import ROLES
from beergame.harness import run_baseline
from beergame.scenarios import PRESETS


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--games", type=int, default=50)
    ap.add_argument("--periods", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    for name in ("basic", "uniform08", "normal10", "classic48"):
        sc = PRESETS[name]()
        for policy in ("basestock", "sterman", "random"):
            rep = run_baseline(
                sc.with_policies(policy), n_games=args.games, periods=args.periods, seed=args.seed
            )
            alloc = "  ".join(
                f"{role[:4]}={v:8.3f}" for role, v in zip(ROLES, rep.per_agent_per_period)
            )
            print(
                f"{name:10s} {policy:9s} per-game {rep.total_per_game:10.2f} "
                f"+/- {rep.ci_halfwidth:7.2f}  per-period {rep.total_per_period:8.4f}  {alloc}"
            )


if __name__ == "__main__":
    main()
