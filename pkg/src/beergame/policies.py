"""Analytic (non-learning) ordering policies: base-stock, Sterman, random d+x.

Each policy maps an agent's local view to a non-negative integer order.  The
policies never see other agents' state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .env import LocalView


def base_stock_act(il: int, oo: int, s: int) -> int:
    """Order up to level `s`: max(0, s - (il + oo)).

    `il` carries backorders as negativity, so il + oo is the inventory
    position.
    """
    return max(0, s - (il + oo))


@dataclass(frozen=True)
class StermanParams:
    alpha: float = -0.5  # inventory-level adjustment gain
    beta: float = -0.2  # on-order adjustment gain
    a_target: float = 0.0  # inventory-level anchor
    b_target: float = 0.0  # on-order anchor


def sterman_act(ao_next: int, il: int, oo: int, p: StermanParams) -> int:
    """Anchoring-and-adjustment order rule.

    The order is the incoming-order forecast plus gain-weighted deviations of
    the inventory level and supply line from their anchors, clamped at zero
    and rounded half-up to an integer.
    """
    q = ao_next + p.alpha * (il - p.a_target) + p.beta * (oo - p.b_target)
    return int(math.floor(max(0.0, q) + 0.5))


def random_act(d: int, a_l: int, a_u: int, rng: np.random.Generator) -> int:
    """d+x order with x drawn uniformly from the integer range [a_l, a_u]."""
    if a_l > a_u:
        raise ValueError("a_l must be <= a_u")
    x = int(rng.integers(a_l, a_u + 1))
    return max(0, d + x)


class BaseStockPolicy:
    """Keep the inventory position at a fixed level.

    The order is placed after this period's incoming order is known, so the
    position is quoted net of it: the arriving order will be filled (or
    backlogged) later in the same period.
    """

    window = 0  # no stacked observation needed

    def __init__(self, s: int):
        self.s = int(s)

    def act(self, view: LocalView) -> int:
        return base_stock_act(view.il - view.arriving_order, view.oo, self.s)


class StermanPolicy:
    window = 0

    def __init__(self, params: StermanParams):
        self.params = params

    def act(self, view: LocalView) -> int:
        return sterman_act(view.arriving_order, view.il, view.oo, self.params)


class RandomPolicy:
    """d+x with uniform random x; owns its RNG so games stay reproducible."""

    window = 0

    def __init__(self, a_l: int, a_u: int, seed=0):
        self.a_l = int(a_l)
        self.a_u = int(a_u)
        self.rng = np.random.default_rng(seed)

    def act(self, view: LocalView) -> int:
        return random_act(view.arriving_order, self.a_l, self.a_u, self.rng)


def sterman_params_for(mu_d: float, l_in: int, l_tr: int) -> StermanParams:
    """Default Sterman anchors: a = mean demand, b = mean demand times the
    agent's total (information + transportation) lead time."""
    return StermanParams(alpha=-0.5, beta=-0.2, a_target=mu_d, b_target=mu_d * (l_in + l_tr))
