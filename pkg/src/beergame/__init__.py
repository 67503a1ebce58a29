"""Beer game simulator, analytic baselines, from-scratch DQN, and game server."""

__version__ = "0.1.0"

from .env import (
    BeerGame,
    ClassicDemand,
    ConfigError,
    FixedHorizon,
    GameConfig,
    GameStateError,
    NormalDemand,
    UniformDemand,
    UniformHorizon,
    reset,
)
from .scenarios import PRESETS, Scenario, load_scenario

__all__ = [
    "BeerGame",
    "ClassicDemand",
    "ConfigError",
    "FixedHorizon",
    "GameConfig",
    "GameStateError",
    "NormalDemand",
    "PRESETS",
    "Scenario",
    "UniformDemand",
    "UniformHorizon",
    "load_scenario",
    "reset",
]
