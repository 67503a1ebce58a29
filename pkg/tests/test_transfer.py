"""Transfer-learning tests: freezing contracts, shape rules, sweeps."""

import numpy as np
import pytest

from beergame.dqn import TrainSchedule
from beergame.neuralnet import MLP, AdamConfig, ShapeError
from beergame.scenarios import basic, transfer_case
from beergame.transfer import (
    FINE_TUNE_LR,
    init_from_source,
    transfer_sweep,
    transfer_train,
)


def small_schedule(**overrides):
    base = dict(
        total_episodes=4,
        warmup_episodes=1,
        m=5,
        hidden=(10, 8),
        validate_every=2,
        validation_games=2,
        validation_periods=15,
        train_horizon_lo=10,
        train_horizon_hi=12,
    )
    base.update(overrides)
    return TrainSchedule(**base)


def make_source(num_actions=5, hidden=(10, 8)):
    return MLP((25,) + hidden + (num_actions,), seed=42)


def test_init_same_shape_copies_everything():
    src = make_source()
    tgt = init_from_source(src, num_actions=5, k=2)
    assert tgt.frozen_layers == 2
    assert tgt.step == 0
    x = np.random.default_rng(0).normal(size=(6, 25))
    np.testing.assert_array_equal(tgt.forward(x), src.forward(x))


def test_init_new_action_space_keeps_hidden_stack():
    src = make_source(num_actions=5)
    tgt = init_from_source(src, num_actions=11, k=1)
    assert tgt.layer_sizes == (25, 10, 8, 11)
    np.testing.assert_array_equal(tgt.weights[0], src.weights[0])
    np.testing.assert_array_equal(tgt.weights[1], src.weights[1])
    assert tgt.weights[2].shape == (8, 11)


def test_init_rejects_bad_k():
    with pytest.raises(ShapeError):
        init_from_source(make_source(), num_actions=5, k=4)
    # a refreshed output layer cannot be frozen
    with pytest.raises(ShapeError):
        init_from_source(make_source(), num_actions=11, k=3)


def test_transfer_train_freezes_layers_bitwise():
    src = make_source()
    frozen_w = src.weights[0].copy()
    frozen_b = src.biases[0].copy()
    result = transfer_train(src, role=0, scenario=basic(), k=1, schedule=small_schedule(), seed=0)
    net = result.final_net
    assert net.step > 20
    np.testing.assert_array_equal(net.weights[0], frozen_w)
    np.testing.assert_array_equal(net.biases[0], frozen_b)
    assert not np.array_equal(net.weights[1], src.weights[1])


def test_transfer_all_layers_frozen_means_no_updates():
    src = make_source()
    result = transfer_train(
        src, role=0, scenario=basic(), k=3, schedule=small_schedule(), seed=0
    )
    net = result.final_net
    for i in range(3):
        np.testing.assert_array_equal(net.weights[i], src.weights[i])
        np.testing.assert_array_equal(net.biases[i], src.biases[i])


def test_transfer_uses_reduced_learning_rate_by_default():
    src = make_source()
    captured = {}

    import beergame.transfer as tr

    orig = tr.train

    def spy(scenario, role, schedule, seed=0, net=None, progress=False):
        captured["lr"] = schedule.adam.base_lr
        return orig(scenario, role, schedule, seed=seed, net=net)

    tr.train = spy
    try:
        transfer_train(src, role=0, scenario=basic(), k=0, schedule=small_schedule(), seed=0)
    finally:
        tr.train = orig
    assert captured["lr"] == FINE_TUNE_LR


def test_transfer_honors_explicit_learning_rate():
    src = make_source()
    sched = small_schedule(adam=AdamConfig(base_lr=3e-4))
    import beergame.transfer as tr

    captured = {}
    orig = tr.train

    def spy(scenario, role, schedule, seed=0, net=None, progress=False):
        captured["lr"] = schedule.adam.base_lr
        return orig(scenario, role, schedule, seed=seed, net=net)

    tr.train = spy
    try:
        transfer_train(src, role=0, scenario=basic(), k=0, schedule=sched, seed=0)
    finally:
        tr.train = orig
    assert captured["lr"] == 3e-4


def test_transfer_rejects_mismatched_input_width():
    src = MLP((50, 10, 8, 5), seed=0)  # m=10 source
    with pytest.raises(ShapeError):
        transfer_train(src, role=0, scenario=basic(), k=1, schedule=small_schedule(), seed=0)


def test_transfer_to_wider_action_space_case():
    # transfer case 3 widens the action set to 11 while keeping costs
    src = make_source(num_actions=5)
    sc = transfer_case(3)
    result = transfer_train(src, role=0, scenario=sc, k=1, schedule=small_schedule(), seed=0)
    assert result.final_net.layer_sizes[-1] == 11
    np.testing.assert_array_equal(result.final_net.weights[0], src.weights[0])


def test_sweep_returns_argmin_and_full_table():
    src_a = make_source()
    src_b = MLP((25, 10, 8, 5), seed=7)
    result = transfer_sweep(
        {"a": src_a, "b": src_b},
        role=0,
        scenario=basic(),
        ks=[1, 2],
        schedule=small_schedule(),
        baseline_cost=500.0,
        seed=0,
    )
    assert len(result.table) == 4
    assert result.best.cost == min(c.cost for c in result.table)
    for cell in result.table:
        assert np.isfinite(cell.gap_pct)
        assert cell.wall_seconds > 0


def test_sweep_single_candidate_is_best():
    src = make_source()
    result = transfer_sweep(
        {"only": src}, role=0, scenario=basic(), ks=[1], schedule=small_schedule(), seed=0
    )
    assert result.best.source == "only"
    assert len(result.table) == 1


def test_sweep_empty_candidates_rejected():
    with pytest.raises(ValueError):
        transfer_sweep({}, role=0, scenario=basic(), ks=[1], schedule=small_schedule())
