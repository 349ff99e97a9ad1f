"""Tests for the MLP core and the Adam optimizer."""

import numpy as np
import pytest

from rlihf_bench.errors import NetworkError
from rlihf_bench.nn import MLP, Adam, AdamState, adam_step, mlp_backward, mlp_forward


def numeric_grad(f, param: np.ndarray, h: float = 1e-5) -> np.ndarray:
    grad = np.zeros_like(param)
    it = np.nditer(param, flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        saved = param[idx]
        param[idx] = saved + h
        plus = f()
        param[idx] = saved - h
        minus = f()
        param[idx] = saved
        grad[idx] = (plus - minus) / (2 * h)
    return grad


def rel_error(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(a) + np.abs(b), 1e-6)))


@pytest.fixture
def net(rng) -> MLP:
    return MLP.build([5, 7, 6, 3], rng, hidden_activation="tanh")


def test_build_sizes(net):
    assert net.sizes == [5, 7, 6, 3]
    assert net.in_features == 5
    assert net.out_features == 3
    assert net.parameter_count == 5 * 7 + 7 + 7 * 6 + 6 + 6 * 3 + 3
    assert all(not b.any() for b in net.biases)


def test_single_vector_keeps_shape(net, rng):
    x = rng.normal(size=5)
    out, _ = net.forward(x)
    assert out.shape == (3,)
    assert np.allclose(out, net.predict(x[None, :])[0])


def test_parameter_gradients_match_finite_differences(net, rng):
    x = rng.normal(size=(4, 5))
    weights = rng.normal(size=(4, 3))

    def loss() -> float:
        return float(np.sum(net.forward(x)[0] * weights))

    out, cache = mlp_forward(net, x)
    grads = mlp_backward(net, cache, weights)
    for param, grad in zip(net.parameters(), grads):
        assert rel_error(grad, numeric_grad(loss, param)) < 1e-4


def test_input_gradient_matches_finite_differences(net, rng):
    x = rng.normal(size=(2, 5))
    weights = rng.normal(size=(2, 3))
    _, cache = net.forward(x)
    _, grad_input = net.backward(cache, weights)
    numeric = numeric_grad(lambda: float(np.sum(net.forward(x)[0] * weights)), x)
    assert rel_error(grad_input, numeric) < 1e-4


def test_zero_network_gives_zero_output(rng):
    net = MLP([np.zeros((3, 4)), np.zeros((4, 2))], [np.zeros(4), np.zeros(2)])
    out, _ = mlp_forward(net, rng.normal(size=(5, 3)))
    assert not out.any()


def test_identity_layer_returns_input(rng):
    net = MLP([np.eye(3)], [np.zeros(3)])
    x = rng.normal(size=(4, 3))
    assert np.array_equal(mlp_forward(net, x)[0], x)


def test_zero_upstream_gradient(net, rng):
    _, cache = mlp_forward(net, rng.normal(size=(3, 5)))
    grads = mlp_backward(net, cache, np.zeros((3, 3)))
    assert all(not g.any() for g in grads)


def test_linear_layer_squared_error_closed_form(rng):
    net = MLP([rng.normal(size=(3, 2))], [rng.normal(size=2)])
    x, y = rng.normal(size=(5, 3)), rng.normal(size=(5, 2))
    out, cache = mlp_forward(net, x)
    residual = 2.0 * (out - y)
    grad_w, grad_b = mlp_backward(net, cache, residual)
    assert np.allclose(grad_w, x.T @ residual)
    assert np.allclose(grad_b, residual.sum(axis=0))


def test_relu_and_tanh_output(rng):
    net = MLP.build([3, 4, 2], rng, hidden_activation="relu", output_activation="tanh")
    out = net.predict(rng.normal(size=(10, 3)) * 10)
    assert np.all(np.abs(out) <= 1.0)


def test_soft_update_moves_toward_source(rng):
    a = MLP.build([2, 3, 1], rng)
    b = MLP.build([2, 3, 1], rng)
    expected = [0.9 * pa + 0.1 * pb for pa, pb in zip(a.parameters(), b.parameters())]
    a.soft_update(b, 0.1)
    for got, want in zip(a.parameters(), expected):
        assert np.allclose(got, want)


def test_copy_is_independent(net):
    clone = net.copy()
    clone.weights[0][0, 0] += 1.0
    assert clone.weights[0][0, 0] != net.weights[0][0, 0]


def test_shape_errors(net):
    with pytest.raises(NetworkError):
        net.forward(np.zeros((2, 4)))
    with pytest.raises(NetworkError):
        net.backward(None, np.zeros(3))
    with pytest.raises(NetworkError):
        MLP([np.zeros((2, 3))], [np.zeros(2)])
    with pytest.raises(NetworkError):
        MLP.build([3], np.random.default_rng(0))


def test_adam_first_step_moves_by_lr():
    params = [np.array([1.0, -2.0])]
    state = AdamState.zeros_like(params)
    adam_step(params, [np.array([0.5, -3.0])], state, lr=0.1)
    assert np.allclose(params[0], [0.9, -1.9], atol=1e-6)
    assert state.t == 1


def test_adam_minimises_quadratic():
    x = np.array([3.0, -4.0])
    opt = Adam([x], lr=0.1)
    for _ in range(500):
        opt.step([2 * x])
    assert np.allclose(x, 0.0, atol=1e-2)


def test_adam_length_mismatch():
    params = [np.zeros(2)]
    with pytest.raises(NetworkError):
        adam_step(params, [], AdamState.zeros_like(params), lr=0.1)


def test_adam_constant_gradient_recursion():
    x = np.array([0.0])
    state = AdamState.zeros_like([x])
    m = v = 0.0
    expected = 0.0
    for t in range(1, 4):
        adam_step([x], [np.array([1.0])], state, lr=0.1)
        m = 0.9 * m + 0.1
        v = 0.999 * v + 0.001
        expected -= 0.1 * (m / (1 - 0.9 ** t)) / (np.sqrt(v / (1 - 0.999 ** t)) + 1e-8)
    assert x[0] == pytest.approx(expected, abs=1e-12)
    assert x[0] == pytest.approx(-0.3, abs=1e-6)


def test_adam_zero_gradient_keeps_parameters():
    x = np.array([1.5, -0.5])
    adam_step([x], [np.zeros(2)], AdamState.zeros_like([x]), lr=0.1)
    assert np.array_equal(x, [1.5, -0.5])
