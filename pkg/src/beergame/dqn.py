"""Q-learning agent and training loop.

One learning seat plays alongside analytic co-players.  Costs are stored as
positive numbers and the agent minimizes, so action selection is an argmin
over Q outputs.  At the end of every episode the stored costs are shifted by
the feedback term beta/3 * (omega - tau), pulling the agent toward the
system-wide average cost rather than its own.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .env import BeerGame, FixedHorizon, UniformHorizon
from .neuralnet import MLP, AdamConfig

log = logging.getLogger(__name__)


def epsilon_at(progress: float, start=0.9, end=0.1, anneal_fraction=0.8) -> float:
    """Linear exploration schedule over the fraction of training iterations."""
    if not 0.0 <= progress <= 1.0:
        raise ValueError("progress must lie in [0, 1]")
    if progress >= anneal_fraction:
        return end
    return start + (end - start) * progress / anneal_fraction


def select_action(net: MLP, obs: np.ndarray, eps: float, rng: np.random.Generator) -> int:
    """Epsilon-greedy argmin over Q; ties break toward the lowest index."""
    n = net.layer_sizes[-1]
    if eps > 0.0 and rng.random() < eps:
        return int(rng.integers(0, n))
    q = net.forward(obs)
    return int(np.argmin(q))


def action_to_order(index: int, a_l: int, d: int) -> int:
    """Map an action index to an order via the d+x rule."""
    return max(0, d + a_l + index)


def q_target(r, s_next, terminal, target_net: MLP, gamma: float):
    """Bootstrap target: r, plus the discounted best next-state Q when not terminal."""
    if terminal:
        return float(r)
    return float(r) + gamma * float(np.min(target_net.forward(s_next)))


@dataclass
class Experience:
    s: np.ndarray
    a: int
    r: float
    s_next: np.ndarray
    terminal: bool


class ReplayMemory:
    """FIFO ring buffer of transitions with episode ranges for reward rewrites."""

    def __init__(self, capacity: int, obs_dim: int):
        self.capacity = int(capacity)
        self.obs_dim = int(obs_dim)
        self.count = 0  # total insertions ever
        self.s = np.zeros((self.capacity, obs_dim), dtype=np.float32)
        self.s_next = np.zeros((self.capacity, obs_dim), dtype=np.float32)
        self.a = np.zeros(self.capacity, dtype=np.int32)
        self.r = np.zeros(self.capacity, dtype=np.float64)
        self.terminal = np.zeros(self.capacity, dtype=bool)

    def __len__(self):
        return min(self.count, self.capacity)

    def add(self, s, a, r, s_next, terminal):
        i = self.count % self.capacity
        self.s[i] = s
        self.a[i] = a
        self.r[i] = r
        self.s_next[i] = s_next
        self.terminal[i] = terminal
        self.count += 1

    def sample(self, batch_size: int, rng: np.random.Generator):
        idx = rng.integers(0, len(self), size=batch_size)
        return (
            self.s[idx].astype(np.float64),
            self.a[idx].copy(),
            self.r[idx].copy(),
            self.s_next[idx].astype(np.float64),
            self.terminal[idx].copy(),
        )

    def shift_rewards(self, start: int, length: int, delta: float) -> bool:
        """Add `delta` to the stored rewards for insertions [start, start+length).

        Returns False (and logs) when part of the range has been evicted.
        """
        if self.count - start > self.capacity:
            log.warning("episode [%d, %d) partially evicted; feedback skipped", start, start + length)
            return False
        idx = np.arange(start, start + length) % self.capacity
        self.r[idx] += delta
        return True


def apply_feedback(memory: ReplayMemory, episode_start: int, cost_streams, beta_i: float, agent: int) -> float:
    """End-of-episode reward rewrite for the learning agent's stored costs.

    `cost_streams` is a (num_agents, T) array of per-period costs.  Every
    stored reward of the episode gains (beta/3)(omega - tau), where omega is
    the all-agent per-period average cost and tau the agent's own.
    """
    costs = np.asarray(cost_streams, dtype=np.float64)
    n_agents, T = costs.shape
    omega = costs.sum() / T
    tau = costs[agent].sum() / T
    delta = (beta_i / (n_agents - 1)) * (omega - tau)
    memory.shift_rewards(episode_start, T, delta)
    return delta


@dataclass
class TrainSchedule:
    total_episodes: int = 60_000
    warmup_episodes: int = 500  # observe-only episodes before learning starts
    epsilon_start: float = 0.9
    epsilon_end: float = 0.1
    epsilon_anneal_fraction: float = 0.8
    target_sync: int = 10_000  # train iterations between target-network copies
    batch_size: int = 64
    replay_capacity: int = 1_000_000
    m: int = 10  # stacked observation periods
    beta: float = 20.0  # feedback coefficient for the learning seat
    gamma: float = 1.0
    hidden: tuple[int, ...] = (180, 130, 61)
    adam: AdamConfig = field(default_factory=AdamConfig)
    validate_every: int = 100  # episodes between validation checkpoints
    validation_games: int = 50
    validation_periods: int = 100
    train_horizon_lo: int = 100
    train_horizon_hi: int = 110

    def __post_init__(self):
        if not 0.0 <= self.epsilon_end <= self.epsilon_start <= 1.0:
            raise ValueError("need 0 <= epsilon_end <= epsilon_start <= 1")


class DQNPolicy:
    """Play-time wrapper: greedy argmin over a trained network's Q-values."""

    def __init__(self, net: MLP, m: int, a_l: int):
        self.net = net
        self.m = int(m)
        self.a_l = int(a_l)
        self.window = self.m

    def act(self, view) -> int:
        idx = int(np.argmin(self.net.forward(view.observation)))
        return action_to_order(idx, self.a_l, view.arriving_order)


@dataclass
class CheckpointRecord:
    episode: int
    val_cost: float  # mean per-game total cost over the validation games
    ci_halfwidth: float
    epsilon: float
    lr: float
    loss: float  # mean train loss since the previous checkpoint


@dataclass
class TrainResult:
    best_net: MLP
    final_net: MLP
    log: list[CheckpointRecord]
    best_episode: int
    best_cost: float
    wall_seconds: float


def train(
    scenario,
    role: int,
    schedule: TrainSchedule,
    seed=0,
    net: MLP | None = None,
    progress: bool = False,
) -> TrainResult:
    """Train one learning seat against the scenario's analytic co-players.

    The scenario's policy specs fill every seat except `role`.  Training games
    draw their horizon uniformly from the schedule's range; validation plays
    fresh fixed-length games greedily every `validate_every` episodes and the
    weights with the best validation cost are returned.
    """
    from .harness import evaluate_policies

    cfg = scenario.config
    n = cfg.num_agents
    a_l, a_u = cfg.action_bounds
    obs_dim = 5 * schedule.m
    if net is None:
        net = MLP((obs_dim,) + tuple(schedule.hidden) + (cfg.num_actions,), seed=seed)
    if net.layer_sizes[0] != obs_dim or net.layer_sizes[-1] != cfg.num_actions:
        raise ValueError(
            f"network shape {net.layer_sizes} does not fit m={schedule.m}, |A|={cfg.num_actions}"
        )
    target = net.clone()
    memory = ReplayMemory(schedule.replay_capacity, obs_dim)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(1,)))

    train_cfg = replace(cfg, horizon=UniformHorizon(schedule.train_horizon_lo, schedule.train_horizon_hi))
    co_policies = [scenario.make_policy(i, seed=seed + i) if i != role else None for i in range(n)]

    planned_iters = max(
        1.0,
        (schedule.total_episodes - schedule.warmup_episodes)
        * (schedule.train_horizon_lo + schedule.train_horizon_hi)
        / 2.0,
    )

    def current_epsilon():
        return epsilon_at(
            min(1.0, net.step / planned_iters),
            schedule.epsilon_start,
            schedule.epsilon_end,
            schedule.epsilon_anneal_fraction,
        )

    def validate(at_seed):
        policies = [
            DQNPolicy(net, schedule.m, a_l) if i == role else scenario.make_policy(i, seed=at_seed + i)
            for i in range(n)
        ]
        val_cfg = replace(cfg, horizon=FixedHorizon(schedule.validation_periods))
        per_game = evaluate_policies(
            val_cfg, policies, schedule.validation_games, seed=at_seed
        ).sum(axis=1)
        return float(per_game.mean()), float(1.96 * per_game.std(ddof=1) / np.sqrt(len(per_game)))

    t0 = time.monotonic()
    records: list[CheckpointRecord] = []
    losses: list[float] = []
    best_cost = np.inf
    best_net = net.clone()
    best_episode = 0

    for episode in range(1, schedule.total_episodes + 1):
        game = BeerGame(train_cfg, seed=np.random.SeedSequence(entropy=seed, spawn_key=(2, episode)))
        episode_start = memory.count
        cost_streams = np.zeros((n, game.horizon))
        obs = game.local_observation(role, schedule.m)
        eps = current_epsilon()
        while not game.terminal:
            t = game.t
            actions = []
            for i in range(n):
                if i == role:
                    a_idx = select_action(net, obs, eps, rng)
                    actions.append(action_to_order(a_idx, a_l, game.local_view(i).arriving_order))
                else:
                    actions.append(co_policies[i].act(game.local_view(i)))
            out = game.step(actions)
            cost_streams[:, t] = out.costs
            obs_next = game.local_observation(role, schedule.m)
            memory.add(obs, a_idx, out.costs[role], obs_next, out.terminal)
            obs = obs_next

            if episode > schedule.warmup_episodes:
                s, a, r, s_next, term = memory.sample(schedule.batch_size, rng)
                y = r + schedule.gamma * np.where(term, 0.0, target.forward(s_next).min(axis=1))
                loss = net.train_step(s, y, a, schedule.adam)
                losses.append(loss)
                if net.step % schedule.target_sync == 0:
                    target.copy_weights_from(net)
                eps = current_epsilon()

        apply_feedback(memory, episode_start, cost_streams, schedule.beta, role)

        if episode % schedule.validate_every == 0 or episode == schedule.total_episodes:
            val_cost, ci = validate(at_seed=seed + 7_000_000 + episode)
            rec = CheckpointRecord(
                episode=episode,
                val_cost=val_cost,
                ci_halfwidth=ci,
                epsilon=eps,
                lr=schedule.adam.lr_at(net.step),
                loss=float(np.mean(losses)) if losses else np.nan,
            )
            records.append(rec)
            losses.clear()
            if val_cost < best_cost:
                best_cost = val_cost
                best_net = net.clone()
                best_episode = episode
            if progress:
                log.info(
                    "episode %d  val %.2f +/- %.2f  eps %.3f  lr %.2e",
                    episode, val_cost, ci, eps, rec.lr,
                )

    return TrainResult(
        best_net=best_net,
        final_net=net,
        log=records,
        best_episode=best_episode,
        best_cost=best_cost,
        wall_seconds=time.monotonic() - t0,
    )
