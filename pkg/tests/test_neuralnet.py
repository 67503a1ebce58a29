"""Network tests: finite-difference gradients, freezing, schedules, round trips."""

import numpy as np
import pytest

from beergame.neuralnet import (
    MLP,
    AdamConfig,
    ShapeError,
    WeightFormatError,
    from_bytes,
    to_bytes,
)


def batch_loss(net, x, y, a):
    q = net.forward(x)
    rows = np.arange(x.shape[0])
    return float(np.mean((q[rows, a] - y) ** 2))


def finite_difference_check(net, x, y, a, h=1e-5, tol=1e-4):
    """Compare every parameter's backprop gradient with central differences."""
    _, grads_w, grads_b = net.gradients(x, y, a)
    worst = 0.0
    for layer in range(net.num_layers):
        for theta, grad in ((net.weights[layer], grads_w[layer]), (net.biases[layer], grads_b[layer])):
            flat = theta.reshape(-1)
            gflat = grad.reshape(-1)
            for j in range(flat.size):
                orig = flat[j]
                flat[j] = orig + h
                up = batch_loss(net, x, y, a)
                flat[j] = orig - h
                down = batch_loss(net, x, y, a)
                flat[j] = orig
                fd = (up - down) / (2 * h)
                denom = max(abs(fd), abs(gflat[j]), 1e-8)
                worst = max(worst, abs(fd - gflat[j]) / denom)
    assert worst < tol, f"worst relative gradient error {worst:.2e}"
    return worst


def make_batch(rng, net, b=4):
    x = rng.normal(size=(b, net.layer_sizes[0]))
    y = rng.normal(size=b)
    a = rng.integers(0, net.layer_sizes[-1], size=b)
    return x, y, a


@pytest.mark.parametrize("sizes", [(3, 5, 2), (6, 8, 7, 4), (4, 4, 4, 4, 3)])
def test_gradients_match_finite_differences_micro(sizes):
    rng = np.random.default_rng(hash(sizes) % 2**31)
    net = MLP(sizes, seed=1)
    x, y, a = make_batch(rng, net, b=5)
    finite_difference_check(net, x, y, a)


def test_forward_zero_weights_gives_zero():
    net = MLP((4, 6, 3), seed=0)
    for w in net.weights:
        w[...] = 0.0
    x = np.random.default_rng(0).normal(size=(7, 4))
    assert np.all(net.forward(x) == 0.0)


def test_forward_hand_computed_micro_net():
    # 1 input -> 1 hidden (ReLU) -> 1 output, hand-set weights
    net = MLP((1, 1, 1), seed=0)
    net.weights[0][...] = [[2.0]]
    net.biases[0][...] = [-1.0]
    net.weights[1][...] = [[3.0]]
    net.biases[1][...] = [0.5]
    # x=2: relu(2*2-1)=3 -> 3*3+0.5 = 9.5 ; x=0: relu(-1)=0 -> 0.5
    assert net.forward(np.array([2.0]))[0] == 9.5
    assert net.forward(np.array([0.0]))[0] == 0.5


def test_relu_positive_homogeneity_without_biases():
    net = MLP((5, 7, 3), seed=2)
    for b in net.biases:
        b[...] = 0.0
    x = np.abs(np.random.default_rng(3).normal(size=5))
    np.testing.assert_allclose(net.forward(3.0 * x), 3.0 * net.forward(x), rtol=1e-12)


def test_forward_shape_error():
    net = MLP((4, 3, 2), seed=0)
    with pytest.raises(ShapeError):
        net.forward(np.zeros(5))


def test_zero_error_batch_keeps_loss_zero():
    net = MLP((3, 4, 2), seed=5)
    rng = np.random.default_rng(6)
    x = rng.normal(size=(4, 3))
    a = rng.integers(0, 2, size=4)
    y = net.forward(x)[np.arange(4), a]  # targets equal predictions
    loss = net.train_step(x, y, a, AdamConfig())
    assert loss == 0.0
    # zero gradient: parameters unchanged up to Adam's zero-step
    loss2 = batch_loss(net, x, y, a)
    assert loss2 < 1e-20


def test_learning_rate_staircase():
    adam = AdamConfig()
    assert adam.lr_at(0) == 0.00025
    assert adam.lr_at(9_999) == 0.00025
    assert adam.lr_at(10_000) == 0.00025 * 0.98
    assert adam.lr_at(25_000) == 0.00025 * 0.98**2


def test_freezing_keeps_layers_bitwise():
    net = MLP((6, 8, 7, 4), seed=7, frozen_layers=2)
    frozen = [(net.weights[i].copy(), net.biases[i].copy()) for i in range(2)]
    live = net.weights[2].copy()
    rng = np.random.default_rng(8)
    adam = AdamConfig(base_lr=1e-3)
    for _ in range(200):
        x, y, a = make_batch(rng, net)
        net.train_step(x, y, a, adam)
    for i, (w, b) in enumerate(frozen):
        assert np.array_equal(net.weights[i], w)
        assert np.array_equal(net.biases[i], b)
    assert not np.array_equal(net.weights[2], live)


def test_training_is_deterministic():
    def run():
        net = MLP((5, 9, 4), seed=11)
        rng = np.random.default_rng(12)
        adam = AdamConfig()
        for _ in range(50):
            x, y, a = make_batch(rng, net)
            net.train_step(x, y, a, adam)
        return to_bytes(net)

    assert run() == run()


def test_loss_non_increasing_small_lr():
    net = MLP((4, 10, 3), seed=13)
    rng = np.random.default_rng(14)
    x, y, a = make_batch(rng, net, b=16)
    adam = AdamConfig(base_lr=1e-5)
    first = batch_loss(net, x, y, a)
    for _ in range(100):
        net.train_step(x, y, a, adam)
    assert batch_loss(net, x, y, a) <= first


def test_non_finite_loss_raises():
    net = MLP((2, 3, 2), seed=0)
    net.weights[0][...] = np.inf
    with pytest.raises(FloatingPointError):
        net.train_step(np.ones((1, 2)), np.zeros(1), np.zeros(1, dtype=int), AdamConfig())


# -- serialization ---------------------------------------------------------


def test_save_load_round_trip_bitwise():
    net = MLP((5, 8, 6, 3), seed=21)
    rng = np.random.default_rng(22)
    adam = AdamConfig()
    for _ in range(30):
        x, y, a = make_batch(rng, net)
        net.train_step(x, y, a, adam)
    blob = to_bytes(net)
    back = from_bytes(blob)
    assert back.layer_sizes == net.layer_sizes
    assert back.step == net.step
    assert back.frozen_layers == net.frozen_layers
    for name in ("weights", "biases", "m_w", "v_w", "m_b", "v_b"):
        for a1, a2 in zip(getattr(net, name), getattr(back, name)):
            assert np.array_equal(a1, a2)
    assert to_bytes(back) == blob


def test_load_rejects_truncated_stream():
    blob = to_bytes(MLP((4, 5, 2), seed=0))
    with pytest.raises(WeightFormatError):
        from_bytes(blob[:-17])


def test_load_rejects_bad_magic():
    blob = to_bytes(MLP((4, 5, 2), seed=0))
    with pytest.raises(WeightFormatError):
        from_bytes(b"XX" + blob[2:])


def test_load_rejects_size_payload_mismatch():
    import struct

    net = MLP((4, 5, 2), seed=0)
    blob = bytearray(to_bytes(net))
    # corrupt the declared layer-size table: payload length no longer matches
    off = len(b"BGMLP\x00") + 4 + 4
    struct.pack_into("<I", blob, off, 9)
    with pytest.raises(WeightFormatError):
        from_bytes(bytes(blob))


def test_weight_transfer_preserves_forward_outputs():
    src = MLP((6, 8, 7, 4), seed=33)
    dst = MLP((6, 8, 7, 4), seed=99)
    dst.copy_weights_from(src)
    x = np.random.default_rng(34).normal(size=(10, 6))
    np.testing.assert_array_equal(dst.forward(x), src.forward(x))


def test_target_snapshot_is_independent():
    net = MLP((4, 6, 3), seed=1)
    snap = net.clone()
    rng = np.random.default_rng(2)
    x, y, a = make_batch(rng, net)
    net.train_step(x, y, a, AdamConfig(base_lr=0.01))
    assert not np.array_equal(net.weights[0], snap.weights[0])
