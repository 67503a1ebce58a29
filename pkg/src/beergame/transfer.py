"""Transfer learning: reuse a trained network on a new seat or scenario.

The target network starts from the source weights with its first k layers
frozen and trains with a reduced learning rate.  When the target action space
differs, the output layer is re-initialized (the hidden stack must match) and
only hidden layers may be frozen.
"""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass, replace

from .dqn import TrainResult, TrainSchedule, train
from .neuralnet import MLP, AdamConfig, ShapeError, load_weights

FINE_TUNE_LR = 0.00025 / 10  # "small learning rate" for retraining


def _as_net(source) -> MLP:
    if isinstance(source, MLP):
        return source
    return load_weights(source)


def init_from_source(source: MLP, num_actions: int, k: int, seed=0) -> MLP:
    """Build the target network from source weights with k frozen layers."""
    if not 0 <= k <= source.num_layers:
        raise ShapeError(f"k must lie in [0, {source.num_layers}]")
    if num_actions == source.layer_sizes[-1]:
        net = source.clone()
        net.frozen_layers = k
        net.step = 0
        for group in (net.m_w, net.v_w, net.m_b, net.v_b):
            for arr in group:
                arr[...] = 0.0
        return net
    # different action space: keep the hidden stack, refresh the output layer
    if k > source.num_layers - 1:
        raise ShapeError("cannot freeze the re-initialized output layer")
    sizes = source.layer_sizes[:-1] + (num_actions,)
    net = MLP(sizes, seed=seed, frozen_layers=k)
    for i in range(source.num_layers - 1):
        net.weights[i][...] = source.weights[i]
        net.biases[i][...] = source.biases[i]
    return net


def transfer_train(
    source,
    role: int,
    scenario,
    k: int,
    schedule: TrainSchedule,
    seed=0,
) -> TrainResult:
    """Retrain a source network for `role` on `scenario` with k frozen layers.

    The source may be an MLP or a weight-file path.  Source and target must
    share the observation window (input width) and hidden shape.  Unless the
    schedule overrides it, the fine-tune learning rate is a tenth of the
    from-scratch default.
    """
    source = _as_net(source)
    obs_dim = 5 * schedule.m
    if source.layer_sizes[0] != obs_dim:
        raise ShapeError(
            f"source input width {source.layer_sizes[0]} does not match m={schedule.m}"
        )
    if tuple(source.layer_sizes[1:-1]) != tuple(schedule.hidden):
        raise ShapeError("source hidden shape differs from the schedule's")
    if schedule.adam.base_lr == AdamConfig().base_lr:
        schedule = replace(schedule, adam=replace(schedule.adam, base_lr=FINE_TUNE_LR))
    net = init_from_source(source, scenario.config.num_actions, k, seed=seed)
    return train(scenario, role, schedule, seed=seed, net=net)


@dataclass
class SweepCell:
    source: str
    k: int
    cost: float
    gap_pct: float
    wall_seconds: float


@dataclass
class SweepResult:
    best: SweepCell
    table: list[SweepCell]


def transfer_sweep(
    sources: dict,
    role: int,
    scenario,
    ks,
    schedule: TrainSchedule,
    baseline_cost: float | None = None,
    seed=0,
) -> SweepResult:
    """Try every (source, k) pair; return the argmin by validation cost.

    `sources` maps a label to an MLP or weight path.  The gap column compares
    against `baseline_cost` when given (same sign convention as the harness:
    negative means the transfer run beat the baseline).
    """
    if not sources or not list(ks):
        raise ValueError("need at least one source and one k")
    table = []
    for label, src in sources.items():
        for k in ks:
            t0 = time.monotonic()
            result = transfer_train(src, role, scenario, k, schedule, seed=seed)
            gap = (
                100.0 * (result.best_cost - baseline_cost) / baseline_cost
                if baseline_cost
                else float("nan")
            )
            table.append(
                SweepCell(
                    source=str(label),
                    k=int(k),
                    cost=result.best_cost,
                    gap_pct=gap,
                    wall_seconds=time.monotonic() - t0,
                )
            )
    best = min(table, key=lambda c: c.cost)
    return SweepResult(best=best, table=table)


def sweep_rows(result: SweepResult):
    for cell in result.table:
        yield dataclasses.asdict(cell)
