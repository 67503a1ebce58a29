"""Named scenario presets and the scenario file format.

A scenario bundles a GameConfig with per-agent policy assignments and the
base-stock levels used by base-stock seats.  The shipped presets cover the
basic uniform-demand setup, the three literature benchmark cases, and the
transfer-learning variants.

Scenario files are YAML with the same structure as :func:`scenario_to_dict`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import yaml

from .env import (
    ClassicDemand,
    ConfigError,
    FixedHorizon,
    GameConfig,
    NormalDemand,
    UniformDemand,
    UniformHorizon,
)
from .policies import BaseStockPolicy, RandomPolicy, StermanPolicy, sterman_params_for


@dataclass
class PolicySpec:
    """Per-agent policy selection as named in scenario files."""

    kind: str  # "basestock" | "sterman" | "random" | "dqn"
    s: int | None = None  # base-stock level (basestock)
    weights: str | None = None  # weight file path (dqn)
    m: int | None = None  # observation window (dqn)


@dataclass
class Scenario:
    name: str
    config: GameConfig
    base_stock: tuple[int, ...]
    policies: tuple[PolicySpec, ...] = ()
    description: str = ""

    def __post_init__(self):
        if not self.policies:
            self.policies = tuple(PolicySpec("basestock", s=s) for s in self.base_stock)

    def make_policy(self, agent: int, seed=0):
        """Instantiate the analytic policy object for one seat."""
        spec = self.policies[agent]
        return make_policy(spec, self, agent, seed)

    def with_policies(self, kinds: str | list[str]) -> "Scenario":
        """Return a copy whose seats all use the given policy kind(s)."""
        if isinstance(kinds, str):
            kinds = [kinds] * self.config.num_agents
        specs = []
        for i, kind in enumerate(kinds):
            s = self.base_stock[i] if kind == "basestock" else None
            specs.append(PolicySpec(kind, s=s))
        return replace(self, policies=tuple(specs))


def make_policy(spec: PolicySpec, scenario: Scenario, agent: int, seed=0):
    cfg = scenario.config
    if spec.kind == "basestock":
        s = spec.s if spec.s is not None else scenario.base_stock[agent]
        return BaseStockPolicy(s)
    if spec.kind == "sterman":
        params = sterman_params_for(cfg.demand.mean(), cfg.l_in[agent], cfg.l_tr[agent])
        return StermanPolicy(params)
    if spec.kind == "random":
        return RandomPolicy(*cfg.action_bounds, seed=seed)
    if spec.kind == "dqn":
        from .dqn import DQNPolicy
        from .neuralnet import load_weights

        if not spec.weights:
            raise ConfigError("dqn policy needs a weight file")
        net = load_weights(spec.weights)
        m = spec.m or net.layer_sizes[0] // 5
        return DQNPolicy(net, m=m, a_l=cfg.action_bounds[0])
    raise ConfigError(f"unknown policy kind {spec.kind!r}")


def warm_start(config: GameConfig, base_stock) -> GameConfig:
    """Prime a config at the deterministic mean-demand equilibrium.

    Every pipeline slot carries the mean demand and each agent's inventory
    level is its base-stock level minus the demand covering its effective
    replenishment lead.  A stage whose level cannot cover its lead runs a
    standing backlog, which lengthens the effective lead of the stages below
    it (their goods queue behind the backlog).  With demand fixed at its mean
    this state is a fixed point of all-base-stock play.
    """
    n = config.num_agents
    mu = int(round(config.demand.initial_mean()))
    il = [0] * n
    queue_delay = 0.0  # periods a marginal order waits at the upstream stage
    for i in range(n - 1, -1, -1):
        lead = config.l_in[i] + queue_delay + config.l_tr[i]
        il[i] = int(round(base_stock[i] - mu * lead))
        queue_delay = max(0, -il[i]) / mu if mu > 0 else 0.0
    # the manufacturer's supply channel spans its information lead as well
    init_as = [tuple([mu] * config.l_tr[i]) for i in range(n - 1)]
    init_as.append(tuple([mu] * (config.l_in[n - 1] + config.l_tr[n - 1])))
    # agent i+1's incoming-order pipe holds agent i's orders in transit;
    # the retailer's holds customer demand in transit
    init_ao = [tuple([mu] * config.l_in[0])]
    for i in range(n - 1):
        init_ao.append(tuple([mu] * config.l_in[i]))
    return replace(
        config,
        init_il=tuple(il),
        init_ao=tuple(init_ao),
        init_as=tuple(init_as),
    )


# ---------------------------------------------------------------------------
# presets


def basic() -> Scenario:
    """Uniform {0,1,2} demand, costs concentrated on the retailer, +/-2 actions."""
    cfg = GameConfig(
        l_in=(2, 2, 2, 2),
        l_tr=(2, 2, 2, 2),
        c_h=(2.0, 2.0, 2.0, 2.0),
        c_p=(2.0, 0.0, 0.0, 0.0),
        demand=UniformDemand(0, 2),
        horizon=FixedHorizon(100),
        action_bounds=(-2, 2),
        observe_as_before_action=True,
    )
    s = (8, 8, 0, 0)
    return Scenario("basic", warm_start(cfg, s), s, description="basic uniform-demand case")


def uniform08() -> Scenario:
    cfg = GameConfig(
        l_in=(2, 2, 2, 2),
        l_tr=(2, 2, 2, 1),
        c_h=(0.5, 0.5, 0.5, 0.5),
        c_p=(1.0, 1.0, 1.0, 1.0),
        demand=UniformDemand(0, 8),
        horizon=FixedHorizon(100),
        action_bounds=(-8, 8),
        observe_as_before_action=False,
    )
    s = (19, 20, 20, 14)
    return Scenario("uniform08", warm_start(cfg, s), s, description="uniform 0..8 demand, costs at every stage")


def normal10() -> Scenario:
    cfg = GameConfig(
        l_in=(2, 2, 2, 2),
        l_tr=(2, 2, 2, 1),
        c_h=(1.0, 0.75, 0.5, 0.25),
        c_p=(10.0, 0.0, 0.0, 0.0),
        demand=NormalDemand(10.0, 2.0),
        horizon=FixedHorizon(100),
        action_bounds=(-5, 5),
        observe_as_before_action=False,
    )
    s = (48, 43, 41, 30)
    return Scenario("normal10", warm_start(cfg, s), s, description="normal(10,4) demand, high retailer shortage cost")


def classic48() -> Scenario:
    cfg = GameConfig(
        l_in=(2, 2, 2, 2),
        l_tr=(2, 2, 2, 1),
        c_h=(0.5, 0.5, 0.5, 0.5),
        c_p=(1.0, 1.0, 1.0, 1.0),
        demand=ClassicDemand(4, 8, 4),
        horizon=FixedHorizon(100),
        action_bounds=(-8, 8),
        observe_as_before_action=False,
    )
    s = (32, 32, 32, 24)
    return Scenario("classic48", warm_start(cfg, s), s, description="step demand 4 then 8 from period 4")


def _transfer_base(c_h, c_p, bounds, demand=None, s=None) -> GameConfig:
    return GameConfig(
        l_in=(2, 2, 2, 2),
        l_tr=(2, 2, 2, 2),
        c_h=c_h,
        c_p=c_p,
        demand=demand or UniformDemand(0, 2),
        horizon=FixedHorizon(100),
        action_bounds=bounds,
        observe_as_before_action=True,
    )


def transfer_case(n: int) -> Scenario:
    """Transfer-learning target scenarios: changed costs, action spaces, and
    (cases 5-6) demand law relative to the basic setup.  Base-stock seats keep
    the basic levels for cases 1-4 and the normal-demand levels for 5-6."""
    if n == 1:
        cfg = _transfer_base((2.0, 2.0, 2.0, 2.0), (2.0, 0.0, 0.0, 0.0), (-2, 2))
        s = (8, 8, 0, 0)
    elif n == 2:
        cfg = _transfer_base((5.0, 5.0, 5.0, 5.0), (1.0, 0.0, 0.0, 0.0), (-2, 2))
        s = (8, 8, 0, 0)
    elif n == 3:
        cfg = _transfer_base((2.0, 2.0, 2.0, 2.0), (2.0, 0.0, 0.0, 0.0), (-5, 5))
        s = (8, 8, 0, 0)
    elif n == 4:
        cfg = _transfer_base((10.0, 10.0, 10.0, 10.0), (1.0, 0.0, 0.0, 0.0), (-5, 5))
        s = (8, 8, 0, 0)
    elif n in (5, 6):
        cfg = _transfer_base(
            (1.0, 0.75, 0.5, 0.25),
            (10.0, 0.0, 0.0, 0.0),
            (-5, 5),
            demand=NormalDemand(10.0, 2.0),
        )
        s = (48, 43, 41, 30)
    else:
        raise ConfigError("transfer cases are numbered 1..6")
    return Scenario(f"transfer{n}", warm_start(cfg, s), s, description=f"transfer target case {n}")


PRESETS = {
    "basic": basic,
    "uniform08": uniform08,
    "normal10": normal10,
    "classic48": classic48,
    "transfer1": lambda: transfer_case(1),
    "transfer2": lambda: transfer_case(2),
    "transfer3": lambda: transfer_case(3),
    "transfer4": lambda: transfer_case(4),
    "transfer5": lambda: transfer_case(5),
    "transfer6": lambda: transfer_case(6),
}


def load_scenario(name_or_path: str) -> Scenario:
    """Resolve a preset name or read a YAML scenario file."""
    if name_or_path in PRESETS:
        return PRESETS[name_or_path]()
    with open(name_or_path) as fh:
        return scenario_from_dict(yaml.safe_load(fh))


# ---------------------------------------------------------------------------
# file format


_DEMAND_TAGS = {"uniform": UniformDemand, "normal": NormalDemand, "classic": ClassicDemand}


def _demand_to_dict(law) -> dict:
    if isinstance(law, UniformDemand):
        return {"kind": "uniform", "lo": law.lo, "hi": law.hi}
    if isinstance(law, NormalDemand):
        return {"kind": "normal", "mu": law.mu, "sigma": law.sigma}
    return {"kind": "classic", "early": law.early, "late": law.late, "switch_period": law.switch_period}


def _demand_from_dict(d: dict):
    kind = d.pop("kind")
    return _DEMAND_TAGS[kind](**d)


def _horizon_to_dict(law) -> dict:
    if isinstance(law, FixedHorizon):
        return {"kind": "fixed", "T": law.T}
    return {"kind": "uniform", "lo": law.lo, "hi": law.hi}


def _horizon_from_dict(d: dict):
    d = dict(d)
    kind = d.pop("kind")
    return FixedHorizon(**d) if kind == "fixed" else UniformHorizon(**d)


def scenario_to_dict(sc: Scenario) -> dict:
    cfg = sc.config
    agents = []
    for i in range(cfg.num_agents):
        p = sc.policies[i]
        policy = {"kind": p.kind}
        if p.s is not None:
            policy["s"] = p.s
        if p.weights:
            policy["weights"] = p.weights
        if p.m:
            policy["m"] = p.m
        agents.append(
            {
                "l_in": cfg.l_in[i],
                "l_tr": cfg.l_tr[i],
                "c_h": cfg.c_h[i],
                "c_p": cfg.c_p[i],
                "init_il": cfg.init_il[i],
                "init_ao": list(cfg.init_ao[i]),
                "init_as": list(cfg.init_as[i]),
                "base_stock": sc.base_stock[i],
                "policy": policy,
            }
        )
    return {
        "name": sc.name,
        "demand": _demand_to_dict(cfg.demand),
        "horizon": _horizon_to_dict(cfg.horizon),
        "action_bounds": list(cfg.action_bounds),
        "observe_as_before_action": cfg.observe_as_before_action,
        "gamma": cfg.gamma,
        "agents": agents,
    }


def scenario_from_dict(d: dict) -> Scenario:
    agents = d["agents"]
    cfg = GameConfig(
        num_agents=len(agents),
        l_in=tuple(a["l_in"] for a in agents),
        l_tr=tuple(a["l_tr"] for a in agents),
        c_h=tuple(float(a["c_h"]) for a in agents),
        c_p=tuple(float(a["c_p"]) for a in agents),
        demand=_demand_from_dict(dict(d["demand"])),
        horizon=_horizon_from_dict(d["horizon"]),
        action_bounds=tuple(d["action_bounds"]),
        observe_as_before_action=bool(d.get("observe_as_before_action", True)),
        init_il=tuple(int(a.get("init_il", 0)) for a in agents),
        init_ao=tuple(tuple(a.get("init_ao", ())) for a in agents),
        init_as=tuple(tuple(a.get("init_as", ())) for a in agents),
        gamma=float(d.get("gamma", 1.0)),
    )
    policies = tuple(
        PolicySpec(
            kind=a["policy"]["kind"],
            s=a["policy"].get("s"),
            weights=a["policy"].get("weights"),
            m=a["policy"].get("m"),
        )
        for a in agents
    )
    return Scenario(
        name=d.get("name", "custom"),
        config=cfg,
        base_stock=tuple(int(a.get("base_stock", 0)) for a in agents),
        policies=policies,
    )


def save_scenario(sc: Scenario, path: str):
    with open(path, "w") as fh:
        yaml.safe_dump(scenario_to_dict(sc), fh, sort_keys=False)
