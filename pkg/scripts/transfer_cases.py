#!/usr/bin/env python3
"""Run the transfer-learning cases: fine-tune a source network on each target
scenario over a (source, k) grid and report the best cell per case.

Case 1 retargets another seat in the same game; 2 changes cost coefficients;
3 widens the action space; 4 changes both; 5 also changes the demand law; 6
additionally swaps the co-player policy to Sterman or random.
"""

import argparse
from pathlib import Path

from beergame.dqn import TrainSchedule
from beergame.harness import run_baseline, write_delimited
from beergame.neuralnet import load_weights
from beergame.scenarios import transfer_case
from beergame.transfer import sweep_rows, transfer_sweep

CASE_CO_POLICY = {1: "basestock", 2: "basestock", 3: "basestock", 4: "basestock",
                  5: "basestock", 6: "sterman"}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--source-weights", required=True, nargs="+",
                    help="trained base networks (m=10 shape [50,180,130,61,5])")
    ap.add_argument("--cases", type=int, nargs="+", default=[1, 2, 3, 4, 5, 6])
    ap.add_argument("--role", type=int, default=0)
    ap.add_argument("--k", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--episodes", type=int, default=10_000)
    ap.add_argument("--m", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="runs/transfer_cases")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sources = {Path(p).stem: load_weights(p) for p in args.source_weights}
    schedule = TrainSchedule(total_episodes=args.episodes, m=args.m)

    for case in args.cases:
        co = CASE_CO_POLICY[case]
        target = transfer_case(case).with_policies(co)
        # gap reference: the learner's seat replaced by base-stock (BS,
        # Strm-BS, or Rand-BS depending on the case's co-player policy)
        baseline_sc = transfer_case(case).with_policies(
            ["basestock" if i == args.role else co for i in range(4)]
        )
        baseline = run_baseline(baseline_sc, seed=args.seed)
        result = transfer_sweep(
            sources, args.role, target, args.k, schedule,
            baseline_cost=baseline.total_per_game, seed=args.seed,
        )
        write_delimited(out / f"case{case}_sweep.csv", sweep_rows(result))
        print(
            f"case {case}: best source={result.best.source} k={result.best.k} "
            f"cost {result.best.cost:.2f} gap {result.best.gap_pct:+.2f}%"
        )


if __name__ == "__main__":
    main()
