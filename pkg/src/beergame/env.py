"""Discrete-time simulator of the four-stage serial beer-game supply chain.

Each period runs the same fixed event sequence: the customer demand enters the
retailer's incoming-order pipeline, agents commit orders downstream-to-upstream
(orders travel on the orderer's information lead time), the manufacturer's own
order enters its supply channel, and finally goods move upstream-to-downstream:
each agent receives the shipment due this period, ships what it can against old
backorders plus the newly arrived order, absorbs the arrived order into its
inventory level, and pays holding/shortage cost on the resulting level.

Inventory levels are net: negative values are backorders.  An agent ships from
gross on-hand stock, max(0, IL) + arriving shipment, so a backlogged agent still
passes arriving goods straight through.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

ROLES = ("retailer", "warehouse", "distributor", "manufacturer")

# one observation row per period: ((IL)+, (IL)-, OO, AO, AS)
FEATURES_PER_PERIOD = 5


class ConfigError(ValueError):
    """Invalid game configuration."""


class GameStateError(RuntimeError):
    """Operation not valid in the current game state (e.g. stepping a finished game)."""


# ---------------------------------------------------------------------------
# demand and horizon laws


@dataclass(frozen=True)
class UniformDemand:
    """Integer demand uniform on [lo, hi] inclusive."""

    lo: int
    hi: int

    def sample(self, t: int, rng: np.random.Generator) -> int:
        return int(rng.integers(self.lo, self.hi + 1))

    def mean(self) -> float:
        return (self.lo + self.hi) / 2.0

    def initial_mean(self) -> float:
        return self.mean()


@dataclass(frozen=True)
class NormalDemand:
    """Normal(mu, sigma^2) demand, rounded to the nearest integer, clamped at 0."""

    mu: float
    sigma: float

    def sample(self, t: int, rng: np.random.Generator) -> int:
        return max(0, int(np.rint(rng.normal(self.mu, self.sigma))))

    def mean(self) -> float:
        return self.mu

    def initial_mean(self) -> float:
        return self.mu


@dataclass(frozen=True)
class ClassicDemand:
    """Deterministic step demand: `early` before `switch_period`, `late` after."""

    early: int = 4
    late: int = 8
    switch_period: int = 4

    def sample(self, t: int, rng: np.random.Generator) -> int:
        return self.early if t < self.switch_period else self.late

    def mean(self) -> float:
        # stationary level once the switch has happened
        return float(self.late)

    def initial_mean(self) -> float:
        return float(self.early)


DemandLaw = UniformDemand | NormalDemand | ClassicDemand


@dataclass(frozen=True)
class FixedHorizon:
    T: int

    def sample(self, rng: np.random.Generator) -> int:
        return self.T

    def mean(self) -> float:
        return float(self.T)


@dataclass(frozen=True)
class UniformHorizon:
    lo: int
    hi: int

    def sample(self, rng: np.random.Generator) -> int:
        return int(rng.integers(self.lo, self.hi + 1))

    def mean(self) -> float:
        return (self.lo + self.hi) / 2.0


HorizonLaw = FixedHorizon | UniformHorizon


# ---------------------------------------------------------------------------
# configuration


@dataclass
class GameConfig:
    """Full parameterization of one beer-game scenario.

    Lead times and costs are per-agent lists indexed retailer..manufacturer.
    ``l_tr[i]`` is the transportation lead time on agent i's inbound supply
    lane; ``l_in[i]`` is the information lead time on agent i's outbound
    orders.  The manufacturer's orders reach it as shipments after
    ``l_in[-1] + l_tr[-1]`` periods (unlimited raw supply upstream).
    """

    num_agents: int = 4
    l_in: tuple[int, ...] = (2, 2, 2, 2)
    l_tr: tuple[int, ...] = (2, 2, 2, 2)
    c_h: tuple[float, ...] = (2.0, 2.0, 2.0, 2.0)
    c_p: tuple[float, ...] = (2.0, 0.0, 0.0, 0.0)
    demand: DemandLaw = UniformDemand(0, 2)
    horizon: HorizonLaw = FixedHorizon(100)
    action_bounds: tuple[int, int] = (-2, 2)
    observe_as_before_action: bool = True
    init_il: tuple[int, ...] = (0, 0, 0, 0)
    # initial pipeline contents: init_ao[i][j] / init_as[i][j] arrive at agent i
    # in period j (counted from the start of the game)
    init_ao: tuple[tuple[int, ...], ...] = ((), (), (), ())
    init_as: tuple[tuple[int, ...], ...] = ((), (), (), ())
    gamma: float = 1.0

    def __post_init__(self):
        n = self.num_agents
        if n < 2:
            raise ConfigError("need at least two agents")
        for name in ("l_in", "l_tr", "c_h", "c_p", "init_il", "init_ao", "init_as"):
            if len(getattr(self, name)) != n:
                raise ConfigError(f"{name} must have one entry per agent")
        if any(l < 0 for l in self.l_in):
            raise ConfigError("information lead times must be >= 0")
        if any(l < 1 for l in self.l_tr):
            raise ConfigError("transportation lead times must be >= 1")
        if any(c < 0 for c in self.c_h) or any(c < 0 for c in self.c_p):
            raise ConfigError("cost coefficients must be >= 0")
        a_l, a_u = self.action_bounds
        if not (a_l <= 0 <= a_u):
            raise ConfigError("action bounds must satisfy a_l <= 0 <= a_u")
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigError("gamma must lie in [0, 1]")

    @property
    def num_actions(self) -> int:
        a_l, a_u = self.action_bounds
        return a_u - a_l + 1


@dataclass
class AgentState:
    """One agent's book state: net inventory, on-order, and arrival pipelines."""

    il: int
    oo: int
    ao_pipe: defaultdict  # absolute period -> units of arriving orders
    as_pipe: defaultdict  # absolute period -> units of arriving shipments


@dataclass(frozen=True)
class LocalView:
    """What one agent may see when choosing its order for `period`.

    ``arriving_shipment`` honours the scenario's observation timing: when the
    agent only learns this period's shipment after acting, the previous
    period's value is shown instead.
    """

    period: int
    il: int
    oo: int
    arriving_order: int
    arriving_shipment: int
    observation: np.ndarray | None = None  # stacked m-period window, length 5m


@dataclass(frozen=True)
class StepOutcome:
    period: int  # the period that was just played
    rewards: tuple[float, ...]  # negative costs
    costs: tuple[float, ...]
    shipments: tuple[int, ...]  # outbound shipment committed by each agent
    il: tuple[int, ...]  # end-of-period inventory levels
    oo: tuple[int, ...]  # end-of-period on-order quantities
    # each agent's next decision-time row ((IL)+, (IL)-, OO, AO, AS)
    observations: tuple[tuple[int, int, int, int, int], ...]
    terminal: bool


class BeerGame:
    """A single seeded game.  Strict period ordering; one handle per game."""

    def __init__(self, config: GameConfig, seed=0):
        self.config = config
        self.rng = np.random.default_rng(seed)
        n = config.num_agents
        self.horizon = config.horizon.sample(self.rng)
        self.t = 0
        self.agents = []
        for i in range(n):
            ao = defaultdict(int)
            as_ = defaultdict(int)
            for j, units in enumerate(config.init_ao[i]):
                if units:
                    ao[j] = int(units)
            for j, units in enumerate(config.init_as[i]):
                if units:
                    as_[j] = int(units)
            self.agents.append(AgentState(il=int(config.init_il[i]), oo=0, ao_pipe=ao, as_pipe=as_))
        self._init_on_order()
        self.last_as = [0] * n  # shipment received in the previous period
        self.demand_log: list[int] = []
        # per-agent history of ((IL)+, (IL)-, OO, AO, AS) rows, one per played period
        self.history: list[list[tuple[int, int, int, int, int]]] = [[] for _ in range(n)]

    def _init_on_order(self):
        """Reconstruct initial on-order: goods in transit plus orders in
        information transit plus units backlogged at the supplier."""
        cfg = self.config
        n = cfg.num_agents
        for i in range(n):
            oo = sum(self.agents[i].as_pipe.values())
            if i + 1 < n:
                # orders from agent i still travelling sit in agent i+1's AO pipe
                oo += sum(self.agents[i + 1].ao_pipe.values())
                # a negative upstream IL is stock owed to us (single customer)
                oo += max(0, -self.agents[i + 1].il)
            self.agents[i].oo = oo

    # -- inspection ---------------------------------------------------------

    @property
    def terminal(self) -> bool:
        return self.t >= self.horizon

    def _row(self, i: int, lagged_as: bool) -> tuple[int, int, int, int, int]:
        a = self.agents[i]
        ao = a.ao_pipe.get(self.t, 0)
        as_ = self.last_as[i] if lagged_as else a.as_pipe.get(self.t, 0)
        return (max(0, a.il), max(0, -a.il), a.oo, ao, as_)

    def _current_row(self, i: int) -> tuple[int, int, int, int, int]:
        # the shipment arriving this period may only become visible after acting
        return self._row(i, lagged_as=not self.config.observe_as_before_action)

    def local_observation(self, agent: int, m: int) -> np.ndarray:
        """Stacked window of the agent's last m per-period feature rows.

        Rows for periods before the game start are zero; the final row is the
        current decision point.  Length is 5m.
        """
        rows = self.history[agent][max(0, self.t - m + 1): self.t]
        pad = m - 1 - len(rows)
        flat: list[int] = [0] * (pad * FEATURES_PER_PERIOD)
        for row in rows:
            flat.extend(row)
        flat.extend(self._current_row(agent))
        return np.asarray(flat, dtype=np.float64)

    def local_view(self, agent: int, m: int | None = None) -> LocalView:
        a = self.agents[agent]
        row = self._current_row(agent)
        obs = self.local_observation(agent, m) if m else None
        return LocalView(
            period=self.t,
            il=a.il,
            oo=a.oo,
            arriving_order=row[3],
            arriving_shipment=row[4],
            observation=obs,
        )

    # -- dynamics -----------------------------------------------------------

    def step(self, actions) -> StepOutcome:
        """Play one period with the given per-agent order quantities."""
        if self.terminal:
            raise GameStateError(f"game is over (t={self.t}, T={self.horizon})")
        cfg = self.config
        n = cfg.num_agents
        actions = [int(a) for a in actions]
        if len(actions) != n:
            raise ValueError(f"expected {n} actions, got {len(actions)}")
        if any(a < 0 for a in actions):
            raise ValueError("orders must be non-negative")

        t = self.t
        for i in range(n):
            # history keeps the true row: by the end of the period the agent
            # has observed this period's shipment either way
            self.history[i].append(self._row(i, lagged_as=False))

        # customer demand enters the retailer's incoming-order pipeline
        d = cfg.demand.sample(t, self.rng)
        self.demand_log.append(d)
        self.agents[0].ao_pipe[t + cfg.l_in[0]] += d

        # orders propagate downstream-to-upstream
        for i in range(n):
            self.agents[i].oo += actions[i]
            if i + 1 < n:
                self.agents[i + 1].ao_pipe[t + cfg.l_in[i]] += actions[i]
        # the manufacturer's order becomes a shipment from the raw source
        self.agents[n - 1].as_pipe[t + cfg.l_in[n - 1] + cfg.l_tr[n - 1]] += actions[n - 1]

        # goods move upstream-to-downstream
        costs = [0.0] * n
        shipments = [0] * n
        for i in range(n - 1, -1, -1):
            a = self.agents[i]
            arriving = a.as_pipe.pop(t, 0)
            self.last_as[i] = arriving
            a.oo -= arriving
            on_hand = max(0, a.il) + arriving
            backlog = max(0, -a.il)
            ao = a.ao_pipe.pop(t, 0)
            out = min(on_hand, backlog + ao)
            shipments[i] = out
            if i > 0:
                self.agents[i - 1].as_pipe[t + cfg.l_tr[i - 1]] += out
            a.il = a.il + arriving - ao
            costs[i] = cfg.c_p[i] * max(0, -a.il) + cfg.c_h[i] * max(0, a.il)

        self.t += 1
        return StepOutcome(
            period=t,
            rewards=tuple(-c for c in costs),
            costs=tuple(costs),
            shipments=tuple(shipments),
            il=tuple(a.il for a in self.agents),
            oo=tuple(a.oo for a in self.agents),
            observations=tuple(self._current_row(i) for i in range(n)),
            terminal=self.terminal,
        )


def reset(config: GameConfig, seed=0) -> BeerGame:
    """Start a fresh seeded game."""
    return BeerGame(config, seed)


def sample_demand(law: DemandLaw, t: int, rng: np.random.Generator) -> int:
    """Draw one period's customer demand."""
    if t < 0:
        raise ValueError("period must be >= 0")
    return law.sample(t, rng)
