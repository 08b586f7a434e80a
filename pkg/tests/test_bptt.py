import math

import numpy as np
import pytest

from cyclone_ri.elman import (
    Gradient,
    NetworkOptionsT,
    TopologyT,
    bptt_gradients,
    central_difference,
    finite_difference_gradient,
    init_weights,
    sample_loss,
    sgd_update,
)
from cyclone_ri.elman.bptt import descend

from .helpers import zero_network


def _sig(z):
    return 1.0 / (1.0 + math.exp(-z))


def unrolled_backprop(net, window, label, positive_weight=1.0):
    """Backprop through the network unrolled into len(window) layers with private weight copies,
    summing the per-layer gradients afterwards to tie the weights."""
    k = net.topology.hidden
    v = [[float(net.v[i, m]) for m in range(k)] for i in range(k)]
    w = [float(net.w[0, i]) for i in range(k)]
    u = [float(net.u[i, 0]) for i in range(k)]
    b_h = [float(b) for b in net.b_h]
    b_o = float(net.b_o[0])

    layers = [[net.initial_context] * k]
    for x in window:
        prev = layers[-1]
        layers.append([_sig(b_h[i] + sum(v[i][m] * prev[m] for m in range(k)) + w[i] * x) for i in range(k)])
    final = layers[-1]
    out = _sig(b_o + sum(u[i] * final[i] for i in range(k)))

    target = 1.0 if label else 0.0
    weight = positive_weight if label else 1.0
    d_out = weight * (out - target) * out * (1.0 - out)
    grad = {
        "u": np.array([[final[i] * d_out] for i in range(k)]),
        "b_o": np.array([d_out]),
    }

    per_layer = []
    upstream = [u[i] * d_out for i in range(k)]
    for t in range(len(window), 0, -1):
        y, prev = layers[t], layers[t - 1]
        delta = [upstream[i] * y[i] * (1.0 - y[i]) for i in range(k)]
        per_layer.append(
            {
                "w": [delta[i] * window[t - 1] for i in range(k)],
                "v": [[delta[i] * prev[m] for m in range(k)] for i in range(k)],
                "b_h": list(delta),
            }
        )
        upstream = [sum(v[i][m] * delta[i] for i in range(k)) for m in range(k)]

    grad["w"] = np.array([[sum(layer["w"][i] for layer in per_layer) for i in range(k)]])
    grad["v"] = np.array([[sum(layer["v"][i][m] for layer in per_layer) for m in range(k)] for i in range(k)])
    grad["b_h"] = np.array([sum(layer["b_h"][i] for layer in per_layer) for i in range(k)])
    return grad


def test_gradients_match_finite_differences(rng):
    cases = 0
    for hidden in (5, 10):
        for seed in range(12):
            net = init_weights(TopologyT(hidden=hidden), seed)
            window = rng.uniform(size=5)
            label = bool(rng.integers(2))
            exact = bptt_gradients(net, window, label)
            numeric = finite_difference_gradient(net, window, label, eps=1e-5)
            for name, array in exact.parameters().items():
                np.testing.assert_allclose(array, numeric.parameters()[name], rtol=1e-6, atol=1e-10, err_msg=name)
            cases += 1
    assert cases >= 20


def test_weighted_positive_loss_gradients_match_finite_differences(rng):
    net = init_weights(TopologyT(hidden=5), 99)
    window = rng.uniform(size=5)
    exact = bptt_gradients(net, window, True, positive_weight=20.0)
    numeric = finite_difference_gradient(net, window, True, positive_weight=20.0)
    for name, array in exact.parameters().items():
        np.testing.assert_allclose(array, numeric.parameters()[name], rtol=1e-6, atol=1e-9)


def test_gradients_match_unrolled_network(rng):
    for case in range(100):
        hidden = 5 if case % 2 else 10
        net = init_weights(TopologyT(hidden=hidden), 1000 + case)
        window = [float(x) for x in rng.uniform(size=5)]
        label = bool(case % 3 == 0)
        exact = bptt_gradients(net, window, label)
        oracle = unrolled_backprop(net, window, label)
        for name, array in oracle.items():
            np.testing.assert_allclose(getattr(exact, name), array, rtol=1e-10, atol=1e-14, err_msg=name)


def test_strict_mode_freezes_biases(rng):
    net = init_weights(TopologyT(hidden=5), 4, NetworkOptionsT(use_biases=False))
    window = rng.uniform(size=5)
    exact = bptt_gradients(net, window, True)
    numeric = finite_difference_gradient(net, window, True)
    assert np.all(exact.b_h == 0) and np.all(exact.b_o == 0)
    for name in ("w", "v", "u"):
        np.testing.assert_allclose(getattr(exact, name), getattr(numeric, name), rtol=1e-6, atol=1e-10)
    updated = sgd_update(net, exact, 0.5)
    assert np.all(updated.b_h == 0) and np.all(updated.b_o == 0)


def test_sample_loss(spec_net):
    window = [0.2, 0.3, 0.4, 0.5, 0.6]
    negative = sample_loss(spec_net, window, False)
    positive = sample_loss(spec_net, window, True)
    assert negative >= 0 and positive >= 0
    assert sample_loss(spec_net, window, True, positive_weight=3.0) == pytest.approx(3.0 * positive)
    assert sample_loss(spec_net, window, False, positive_weight=3.0) == negative


def test_finite_difference_rejects_bad_eps(spec_net):
    with pytest.raises(ValueError):
        finite_difference_gradient(spec_net, [0.1] * 5, True, eps=0.0)


def test_sgd_update_leaves_original_untouched(spec_net):
    window = [0.1, 0.2, 0.3, 0.4, 0.5]
    grad = bptt_gradients(spec_net, window, True)
    before = {name: a.copy() for name, a in spec_net.parameters().items()}
    updated = sgd_update(spec_net, grad, 0.1)
    for name, array in spec_net.parameters().items():
        np.testing.assert_array_equal(array, before[name])
        np.testing.assert_allclose(updated.parameters()[name], before[name] - 0.1 * getattr(grad, name))


def test_small_step_reduces_loss(rng):
    for seed in range(10):
        net = init_weights(TopologyT(hidden=5), seed)
        window = rng.uniform(size=5)
        label = bool(seed % 2)
        grad = bptt_gradients(net, window, label)
        assert sample_loss(sgd_update(net, grad, 0.01), window, label) < sample_loss(net, window, label)


def test_descend_checks_shapes(spec_net):
    wrong = Gradient.zeros_like(init_weights(TopologyT(hidden=3), 0))
    with pytest.raises(ValueError):
        descend(spec_net.copy(), wrong, 0.1)


def test_gradient_shapes_and_finiteness(spec_net):
    grad = bptt_gradients(spec_net, [0.9] * 5, False)
    assert grad.is_finite()
    for name, array in spec_net.parameters().items():
        assert getattr(grad, name).shape == array.shape


@pytest.mark.parametrize("label, d_out", [(True, -0.125), (False, 0.125)])
def test_zero_network_gradient_closed_form(label, d_out):
    # every hidden unit and the output sit at 0.5, so d_out = (0.5 - target) * 0.25
    grad = bptt_gradients(zero_network(), [0.1, 0.4, 0.2, 0.8, 0.5], label)
    np.testing.assert_allclose(grad.u, np.full((5, 1), d_out * 0.5))
    np.testing.assert_allclose(grad.b_o, [d_out])
    for name in ("w", "v", "b_h"):
        np.testing.assert_array_equal(getattr(grad, name), 0.0, err_msg=name)


def test_sample_loss_at_midpoint_output():
    net = zero_network()
    window = [0.3, 0.3, 0.3, 0.3, 0.3]
    assert sample_loss(net, window, True) == pytest.approx(0.125)
    assert sample_loss(net, window, False) == pytest.approx(0.125)
    assert sample_loss(net, window, True, target_pos=0.5) == 0.0


def test_central_difference_exact_on_quadratic(rng):
    a = rng.uniform(-2.0, 2.0, size=(3, 2))
    b = rng.uniform(-1.0, 1.0, size=(3, 2))
    x = rng.uniform(-1.0, 1.0, size=(3, 2))

    def quadratic() -> float:
        return float(np.sum(a * x * x + b * x))

    for eps in (0.5, 1.0):
        np.testing.assert_allclose(central_difference(quadratic, x, eps), 2.0 * a * x + b, rtol=1e-12, atol=1e-12)


def test_central_difference_error_is_second_order():
    x = np.array([0.3, -0.7, 1.1])

    def smooth() -> float:
        return float(np.sum(np.exp(x)))

    errors = [np.max(np.abs(central_difference(smooth, x, eps) - np.exp(x))) for eps in (0.02, 0.01, 0.005)]
    for coarse, fine in zip(errors, errors[1:]):
        assert 3.0 < coarse / fine < 5.0


def test_network_finite_difference_error_is_second_order(spec_net):
    window = [0.2, 0.5, 0.4, 0.9, 0.6]
    exact = bptt_gradients(spec_net, window, True)

    def error(eps: float) -> float:
        numeric = finite_difference_gradient(spec_net, window, True, eps=eps)
        return max(np.max(np.abs(numeric.parameters()[name] - array)) for name, array in exact.parameters().items())

    errors = [error(eps) for eps in (0.02, 0.01, 0.005)]
    for coarse, fine in zip(errors, errors[1:]):
        assert 3.0 < coarse / fine < 5.0


def test_sgd_update_without_a_step_is_identity(spec_net):
    window = [0.1, 0.2, 0.3, 0.4, 0.5]
    for updated in (
        sgd_update(spec_net, Gradient.zeros_like(spec_net), 0.1),
        sgd_update(spec_net, bptt_gradients(spec_net, window, True), 0.0),
    ):
        for name, array in spec_net.parameters().items():
            np.testing.assert_array_equal(updated.parameters()[name], array, err_msg=name)


def test_one_step_on_zero_network():
    net = zero_network()
    grad = bptt_gradients(net, [0.1, 0.2, 0.3, 0.4, 0.5], True)
    updated = sgd_update(net, grad, 0.1)
    # u_i = 0 - 0.1 * (-0.0625) and b_o = 0 - 0.1 * (-0.125)
    np.testing.assert_allclose(updated.u, np.full((5, 1), 0.00625))
    np.testing.assert_allclose(updated.b_o, [0.0125])
    for name in ("w", "v", "b_h"):
        np.testing.assert_array_equal(getattr(updated, name), 0.0, err_msg=name)
