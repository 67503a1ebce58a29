"""Seeded experiment runner: baselines, traces, campaigns, and sweeps.

Every reported number is reproducible from (scenario, seed).  Results land in
a directory holding a manifest (config echo, seed, code version), delimited
tables, and weight files for trained seats.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .env import BeerGame, FixedHorizon, ROLES
from .scenarios import Scenario, load_scenario, scenario_to_dict


def game_seeds(seed, n_games: int):
    """Independent per-game seeds derived from one master seed."""
    return np.random.SeedSequence(seed).spawn(n_games)


def play_game(config, policies, seed, trace=None):
    """Run one full game; returns the (num_agents, T) per-period cost matrix.

    When `trace` is a list, one row per agent per period is appended with the
    played order, end-of-period state, reward, and the implied order-up-to
    level (decision-time net inventory position plus the order).
    """
    game = BeerGame(config, seed=seed)
    n = config.num_agents
    costs = np.zeros((n, game.horizon))
    while not game.terminal:
        t = game.t
        views = [game.local_view(i, m=getattr(p, "window", 0) or None) for i, p in enumerate(policies)]
        actions = [p.act(v) for p, v in zip(policies, views)]
        out = game.step(actions)
        costs[:, t] = out.costs
        if trace is not None:
            for i in range(n):
                v = views[i]
                trace.append(
                    {
                        "period": t,
                        "agent": i,
                        "role": ROLES[i] if n == 4 else f"agent{i}",
                        "IL": out.il[i],
                        "OO": out.oo[i],
                        "a": actions[i],
                        "r": out.costs[i],
                        "OUTL": (v.il - v.arriving_order) + v.oo + actions[i],
                    }
                )
    return costs


def evaluate_policies(config, policies, n_games: int, seed=0) -> np.ndarray:
    """Per-game per-agent total costs, shape (n_games, num_agents)."""
    out = np.zeros((n_games, config.num_agents))
    for g, child in enumerate(game_seeds(seed, n_games)):
        out[g] = play_game(config, policies, seed=child).sum(axis=1)
    return out


@dataclass
class BaselineReport:
    scenario: str
    policies: tuple[str, ...]
    n_games: int
    periods: int
    seed: int
    per_agent_per_game: tuple[float, ...]
    per_agent_per_period: tuple[float, ...]
    total_per_game: float
    total_per_period: float
    ci_halfwidth: float  # 95% CI on the per-game total


def run_baseline(scenario: Scenario, n_games=50, periods=100, seed=0) -> BaselineReport:
    """Simulate the scenario's analytic seats; no learning seat allowed."""
    kinds = tuple(p.kind for p in scenario.policies)
    if "dqn" in kinds:
        raise ValueError("run_baseline is for analytic policy sets; use a campaign for DQN seats")
    cfg = replace(scenario.config, horizon=FixedHorizon(periods))
    policies = [scenario.make_policy(i, seed=seed + 101 * i) for i in range(cfg.num_agents)]
    per_game = evaluate_policies(cfg, policies, n_games, seed=seed)
    totals = per_game.sum(axis=1)
    return BaselineReport(
        scenario=scenario.name,
        policies=kinds,
        n_games=n_games,
        periods=periods,
        seed=seed,
        per_agent_per_game=tuple(per_game.mean(axis=0)),
        per_agent_per_period=tuple(per_game.mean(axis=0) / periods),
        total_per_game=float(totals.mean()),
        total_per_period=float(totals.mean() / periods),
        ci_halfwidth=float(1.96 * totals.std(ddof=1) / np.sqrt(n_games)),
    )


def dump_trace(scenario: Scenario, seed=0, periods=100):
    """Single-game full trajectory: period, agent, IL, OO, a, r, OUTL rows."""
    cfg = replace(scenario.config, horizon=FixedHorizon(periods))
    policies = [scenario.make_policy(i, seed=seed + 101 * i) for i in range(cfg.num_agents)]
    rows: list[dict] = []
    play_game(cfg, policies, seed=np.random.SeedSequence(seed), trace=rows)
    return rows


def write_delimited(path, rows, fieldnames=None):
    rows = list(rows)
    if not rows:
        Path(path).write_text("")
        return
    fieldnames = fieldnames or list(rows[0].keys())
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)


def write_manifest(out_dir: Path, scenario: Scenario, seed, extra=None):
    manifest = {
        "version": __version__,
        "created": time.strftime("%Y-%m-%dT%H:%M:%S"),
        "seed": int(seed),
        "scenario": scenario_to_dict(scenario),
    }
    if extra:
        manifest.update(extra)
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2))


def gap_percent(dqn_cost: float, baseline_cost: float) -> float:
    """Signed percentage gap: negative when the learner beats the baseline."""
    return 100.0 * (dqn_cost - baseline_cost) / baseline_cost


# ---------------------------------------------------------------------------
# training campaigns


@dataclass
class Campaign:
    """One training experiment: a scenario, a learning seat, and sweeps."""

    scenario: str
    role: int = 0
    co_policy: str = "basestock"  # basestock | sterman | random
    episodes: int = 60_000
    betas: tuple[float, ...] = (20.0,)
    ms: tuple[int, ...] = (10,)
    c_syncs: tuple[int, ...] = (10_000,)
    seed: int = 0
    n_games: int = 50
    periods: int = 100
    schedule_overrides: dict = field(default_factory=dict)


def run_experiment(campaign: Campaign, out_dir, force=False):
    """Train over the campaign grid and write logs, weights, and a summary.

    The summary table carries one row per grid cell with the trained cost,
    the matching all-analytic baseline, and the signed percentage gap.
    """
    from .dqn import TrainSchedule, train
    from .neuralnet import save_weights

    out_dir = Path(out_dir)
    if out_dir.exists() and any(out_dir.iterdir()) and not force:
        raise FileExistsError(f"{out_dir} is not empty; pass force to overwrite")
    out_dir.mkdir(parents=True, exist_ok=True)

    scenario = load_scenario(campaign.scenario)
    kinds = [campaign.co_policy] * scenario.config.num_agents
    kinds[campaign.role] = "basestock"  # baseline seat mirrors the learner's seat
    baseline_sc = scenario.with_policies(kinds)
    baseline = run_baseline(baseline_sc, campaign.n_games, campaign.periods, campaign.seed)

    co_sc = scenario.with_policies([campaign.co_policy] * scenario.config.num_agents)
    summary = []
    for beta in campaign.betas:
        for m in campaign.ms:
            for c in campaign.c_syncs:
                tag = f"role{campaign.role}_b{beta:g}_m{m}_C{c}"
                schedule = TrainSchedule(
                    total_episodes=campaign.episodes,
                    beta=beta,
                    m=m,
                    target_sync=c,
                    validation_games=campaign.n_games,
                    validation_periods=campaign.periods,
                    **campaign.schedule_overrides,
                )
                result = train(co_sc, campaign.role, schedule, seed=campaign.seed)
                save_weights(result.best_net, out_dir / f"{tag}.weights")
                write_delimited(
                    out_dir / f"{tag}_log.csv",
                    (dataclasses.asdict(r) for r in result.log),
                )
                summary.append(
                    {
                        "role": ROLES[campaign.role],
                        "co_policy": campaign.co_policy,
                        "beta": beta,
                        "m": m,
                        "C": c,
                        "dqn_cost": result.best_cost,
                        "baseline_cost": baseline.total_per_game,
                        "gap_pct": gap_percent(result.best_cost, baseline.total_per_game),
                        "episodes": campaign.episodes,
                        "wall_seconds": round(result.wall_seconds, 1),
                    }
                )
    write_delimited(out_dir / "summary.csv", summary)
    write_manifest(out_dir, scenario, campaign.seed, extra={"campaign": dataclasses.asdict(campaign)})
    return summary
