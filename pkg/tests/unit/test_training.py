import io
import math

import numpy as np
import pytest

from falsestructures.exceptions import DimensionError, DivergedError, DomainError, ParameterError, SerializationError
from falsestructures.nn.initializers import glorot_limit, glorot_uniform_init
from falsestructures.nn.layers import Dense, ReLU
from falsestructures.nn.losses import bce_loss, round_half_up, sigmoid
from falsestructures.nn.network import Network
from falsestructures.nn.optimizer import AdamHyperParameters, AdamState, adam_step
from falsestructures.nn.serialization import MAGIC, dump_network, load_network, parse_network, save_network
from falsestructures.nn.training import Dataset, train


@pytest.mark.unit
@pytest.mark.parametrize(
    ("logits", "labels", "expected"),
    [([0.0], [1.0], math.log(2)), ([0.0, 0.0], [1.0, 0.0], 2 * math.log(2)), ([800.0], [1.0], 0.0)],
)
def test_bce_loss_values(logits, labels, expected):
    assert bce_loss(np.array(logits), np.array(labels)) == pytest.approx(expected)


@pytest.mark.unit
def test_bce_loss_rejects_bad_labels_and_shapes():
    with pytest.raises(DomainError):
        bce_loss(np.zeros(2), np.array([0.0, 0.5]))
    with pytest.raises(DimensionError):
        bce_loss(np.zeros(2), np.zeros(3))


@pytest.mark.unit
def test_sigmoid_is_stable_and_rounds_half_up():
    values = sigmoid(np.array([-1000.0, 0.0, 1000.0]))
    assert np.array_equal(values, [0.0, 0.5, 1.0])
    assert np.array_equal(round_half_up(values), [0, 1, 1])


@pytest.mark.unit
def test_glorot_limit_examples(rng):
    assert glorot_limit((104, 1)) == pytest.approx(math.sqrt(6 / 105))
    assert glorot_limit((3, 3)) == pytest.approx(1.0)
    weights = glorot_uniform_init((104, 1), rng)
    assert np.abs(weights).max() <= glorot_limit((104, 1))


@pytest.mark.unit
def test_glorot_variance(rng):
    limit = glorot_limit((1000, 1000))
    draws = glorot_uniform_init((1000, 1000), rng)
    assert draws.var() == pytest.approx(limit**2 / 3, rel=0.02)


@pytest.mark.unit
def test_adam_first_step_moves_by_lr_against_the_gradient():
    params = {"w": np.array([1.0, -1.0])}
    state = AdamState.for_parameters(params, AdamHyperParameters(lr=0.01))
    adam_step(state, params, {"w": np.array([3.0, -5.0])})
    assert params["w"] == pytest.approx([0.99, -0.99], abs=1e-8)
    assert state.t == 1


@pytest.mark.unit
def test_adam_zero_gradient_keeps_parameters():
    params = {"w": np.array([2.0])}
    state = AdamState.for_parameters(params)
    adam_step(state, params, {"w": np.zeros(1)})
    adam_step(state, params, {"w": np.zeros(1)})
    assert params["w"][0] == 2.0
    assert state.t == 2


@pytest.mark.unit
def test_adam_constant_gradient_decreases_monotonically():
    params = {"w": np.array([0.0])}
    state = AdamState.for_parameters(params, AdamHyperParameters(lr=0.1))
    adam_step(state, params, {"w": np.ones(1)})
    first = params["w"][0]
    adam_step(state, params, {"w": np.ones(1)})
    assert 0.0 > first > params["w"][0]


@pytest.mark.unit
def test_adam_rejects_misshaped_gradient():
    params = {"w": np.zeros(2)}
    with pytest.raises(DimensionError):
        adam_step(AdamState.for_parameters(params), params, {"w": np.zeros(3)})


def small_net(seed: int) -> Network:
    rng = np.random.default_rng(seed)
    return Network([Dense(2, 4, rng=rng), ReLU(), Dense(4, 1, rng=rng)], (2,))


SEPARABLE = Dataset(inputs=np.array([[1.0, 0.0], [-1.0, 0.0]]), labels=np.array([1.0, 0.0]))


@pytest.mark.unit
def test_training_separates_two_points():
    result = train(small_net(0), SEPARABLE, 1000, 2, np.random.default_rng(0), AdamHyperParameters(lr=0.05), 0)
    assert result.final_loss_sum < 1e-2
    assert result.loss_history.shape == (1000,)
    assert result.epoch_means().shape == (1000,)


@pytest.mark.unit
def test_zero_epochs_leave_the_network_unchanged():
    net = small_net(0)
    before = {name: value.copy() for name, value in net.parameters().items()}
    result = train(net, SEPARABLE, 0, 1, np.random.default_rng(0))
    assert result.loss_history.size == 0
    for name, value in net.parameters().items():
        assert np.array_equal(value, before[name])


@pytest.mark.unit
def test_training_is_deterministic():
    first = train(small_net(3), SEPARABLE, 20, 1, np.random.default_rng(9), log_every=0)
    second = train(small_net(3), SEPARABLE, 20, 1, np.random.default_rng(9), log_every=0)
    assert np.array_equal(first.loss_history, second.loss_history)


@pytest.mark.unit
def test_training_validates_batch_size():
    with pytest.raises(ParameterError):
        train(small_net(0), SEPARABLE, 1, 3, np.random.default_rng(0))


@pytest.mark.unit
def test_training_stops_on_non_finite_loss():
    net = small_net(0)
    net.layers[0].params["weight"][0, 0] = np.nan
    with pytest.raises(DivergedError) as error:
        train(net, SEPARABLE, 5, 2, np.random.default_rng(0))
    assert error.value.epoch == 0


@pytest.mark.unit
def test_serialization_round_trip(tmp_path):
    net = small_net(5)
    save_network(net, tmp_path / "net.fsn")
    loaded = load_network(tmp_path / "net.fsn")
    assert loaded.input_shape == net.input_shape
    x = np.random.default_rng(1).normal(size=(10, 2))
    assert np.array_equal(loaded.predict_logits(x), net.predict_logits(x))


@pytest.mark.unit
def test_serialization_rejects_foreign_files():
    with pytest.raises(SerializationError):
        parse_network(io.BytesIO(b"not a network file"))
    stream = io.BytesIO()
    dump_network(small_net(0), stream)
    assert stream.getvalue().startswith(MAGIC)
    with pytest.raises(SerializationError):
        parse_network(io.BytesIO(stream.getvalue()[:-3]))
