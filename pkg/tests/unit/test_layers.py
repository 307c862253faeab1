import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from falsestructures.exceptions import DimensionError, ParameterError, StateError
from falsestructures.nn.layers import Conv2d, Dense, MaxPool2d, ReLU, Sigmoid
from falsestructures.nn.losses import bce_grad, bce_loss
from falsestructures.nn.network import Network

H = 1e-5
MAX_RELATIVE_ERROR = 1e-5


def loss_of(net: Network, x: np.ndarray, labels: np.ndarray) -> float:
    return bce_loss(net.forward(x)[:, 0], labels)


def relative_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-4)


def check_gradients(net: Network, x: np.ndarray, labels: np.ndarray, rng: np.random.Generator, probes: int = 8):
    """Central differences on a few random coordinates of every parameter"""
    logits = net.forward(x, record=True)
    grads = net.backward(bce_grad(logits[:, 0], labels).reshape(logits.shape))
    grads = {name: value.copy() for name, value in grads.items()}
    for name, value in net.parameters().items():
        for flat in rng.choice(value.size, size=min(probes, value.size), replace=False):
            index = np.unravel_index(flat, value.shape)
            original = value[index]
            value[index] = original + H
            plus = loss_of(net, x, labels)
            value[index] = original - H
            minus = loss_of(net, x, labels)
            value[index] = original
            numeric = (plus - minus) / (2 * H)
            assert relative_error(grads[name][index], numeric) < MAX_RELATIVE_ERROR, (name, index)


@pytest.mark.unit
def test_identity_dense_with_relu():
    dense = Dense(2, 2)
    dense.params["weight"][:] = np.eye(2)
    net = Network([dense, ReLU()], (2,))
    assert np.array_equal(net.forward(np.array([-1.0, 2.0])), [0.0, 2.0])


@pytest.mark.unit
def test_single_affine_unit():
    dense = Dense(1, 1)
    dense.params["weight"][:] = [[2.0]]
    dense.params["bias"][:] = [-1.0]
    assert Network([dense], (1,)).forward(np.array([3.0])) == pytest.approx([5.0])


@pytest.mark.unit
def test_zero_input_gives_zero_weight_gradient():
    dense = Dense(3, 2, rng=np.random.default_rng(0))
    upstream = np.array([[0.5, -2.0]])
    _, cache = dense.forward(np.zeros((1, 3)))
    dense.backward(upstream, cache)
    assert not dense.grads["weight"].any()
    assert np.array_equal(dense.grads["bias"], upstream[0])


@pytest.mark.unit
def test_bce_gradient_at_zero_weight():
    dense = Dense(1, 1)
    net = Network([dense], (1,))
    logits = net.forward(np.ones((1, 1)), record=True)
    grads = net.backward(bce_grad(logits[:, 0], np.ones(1)).reshape(logits.shape))
    assert grads["0.weight"][0, 0] == pytest.approx(-0.5)


@pytest.mark.unit
def test_backward_needs_recorded_forward():
    net = Network([Dense(2, 1)], (2,))
    net.forward(np.zeros((1, 2)))
    with pytest.raises(StateError):
        net.backward(np.zeros((1, 1)))


@pytest.mark.unit
def test_layers_that_do_not_compose_name_the_layer():
    with pytest.raises(DimensionError, match="1:dense"):
        Network([Dense(2, 3), Dense(4, 1)], (2,))


@pytest.mark.unit
def test_even_kernel_is_rejected():
    with pytest.raises(ParameterError):
        Conv2d(1, 2, kernel_size=4)


@pytest.mark.unit
def test_conv_keeps_spatial_size_and_pool_uses_ceil():
    conv = Conv2d(1, 3, 5, rng=np.random.default_rng(0))
    assert conv.output_shape((1, 7, 9)) == (3, 7, 9)
    out, _ = conv.forward(np.ones((2, 1, 7, 9)))
    assert out.shape == (2, 3, 7, 9)
    pool = MaxPool2d(2)
    assert pool.output_shape((3, 7, 9)) == (3, 4, 5)
    pooled, _ = pool.forward(out)
    assert pooled.shape == (2, 3, 4, 5)


@pytest.mark.unit
def test_conv_matches_direct_correlation(rng):
    conv = Conv2d(2, 1, 3, rng=rng)
    x = rng.normal(size=(1, 2, 4, 4))
    out, _ = conv.forward(x)
    padded = np.pad(x, ((0, 0), (0, 0), (1, 1), (1, 1)))
    kernel = conv.params["weight"][0]
    expected = np.array(
        [[(padded[0, :, i : i + 3, j : j + 3] * kernel).sum() for j in range(4)] for i in range(4)]
    )
    assert np.allclose(out[0, 0], expected + conv.params["bias"][0])


@pytest.mark.unit
def test_maxpool_routes_gradient_to_the_maximum():
    pool = MaxPool2d(2)
    x = np.array([[[[1.0, 4.0], [3.0, 2.0]]]])
    out, cache = pool.forward(x)
    assert out[0, 0, 0, 0] == 4.0
    grad = pool.backward(np.ones_like(out), cache)
    assert np.array_equal(grad, [[[[0.0, 1.0], [0.0, 0.0]]]])


@pytest.mark.unit
def test_random_relu_net_gradient(rng):
    net = Network([Dense(1, 8, rng=rng), ReLU(), Dense(8, 1, rng=rng)], (1,))
    x = rng.uniform(-1, 1, size=(5, 1))
    check_gradients(net, x, rng.integers(0, 2, size=5).astype(float), rng)


@pytest.mark.unit
@settings(max_examples=100, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    in_dim=st.integers(1, 6),
    hidden=st.integers(1, 6),
    batch=st.integers(1, 4),
    activation=st.sampled_from([ReLU, Sigmoid]),
)
def test_dense_gradients_match_finite_differences(seed, in_dim, hidden, batch, activation):
    rng = np.random.default_rng(seed)
    net = Network([Dense(in_dim, hidden, rng=rng), activation(), Dense(hidden, 1, rng=rng)], (in_dim,))
    x = rng.normal(size=(batch, in_dim))
    check_gradients(net, x, rng.integers(0, 2, size=batch).astype(float), rng)


@pytest.mark.unit
@settings(max_examples=100, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    channels=st.integers(1, 2),
    filters=st.integers(1, 3),
    size=st.integers(5, 7),
    kernel=st.sampled_from([1, 3, 5]),
)
def test_conv_pool_gradients_match_finite_differences(seed, channels, filters, size, kernel):
    rng = np.random.default_rng(seed)
    pooled = math.ceil(size / 2)
    net = Network(
        [
            Conv2d(channels, filters, kernel, rng=rng),
            MaxPool2d(2),
            Dense(filters * pooled * pooled, 1, rng=rng),
        ],
        (channels, size, size),
    )
    x = rng.normal(size=(2, channels, size, size))
    check_gradients(net, x, np.array([0.0, 1.0]), rng)


@pytest.mark.unit
@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), filters=st.integers(1, 3), batch=st.integers(1, 3))
def test_forward_is_deterministic(seed, filters, batch):
    rng = np.random.default_rng(seed)
    net = Network(
        [Conv2d(1, filters, 3, rng=rng), ReLU(), MaxPool2d(2), Dense(filters * 9, 2, rng=rng), Sigmoid()],
        (1, 5, 5),
    )
    x = rng.normal(size=(batch, 1, 5, 5))
    first = net.forward(x)
    assert np.array_equal(first, net.forward(x, record=True))
    assert np.array_equal(first, net.forward(x))


@pytest.mark.unit
@settings(max_examples=200, deadline=None)
@given(
    pairs=st.lists(
        st.tuples(st.floats(-1e6, 1e6, allow_nan=False), st.sampled_from([0.0, 1.0])), min_size=1, max_size=20
    )
)
def test_bce_loss_is_never_negative(pairs):
    logits, labels = (np.array(column) for column in zip(*pairs, strict=True))
    assert bce_loss(logits, labels) >= 0.0
    assert bce_loss(logits, labels, reduction="mean") >= 0.0
