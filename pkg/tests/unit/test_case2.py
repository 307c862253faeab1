import numpy as np
import pytest

from falsestructures.case2.cnn import build_cnn
from falsestructures.case2.experiment import Experiment2Settings, build_test_sets
from falsestructures.case2.generators import StripeSet, enumerate_training_set, sample_test_set
from falsestructures.case2.images import (
    Family,
    Orientation,
    StripeSpec,
    expected_pixel_sum,
    f_orientation,
    pixel_sum,
    pixel_sum_g,
    pixel_sum_g_many,
    render,
)
from falsestructures.exceptions import MalformedImageError, ParameterError
from falsestructures.models.constants import TABLE1_ROWS


def spec(family: Family, orientation: Orientation, a: float, position: int = 10) -> StripeSpec:
    return StripeSpec(orientation=orientation, position=position, family=family, a=a)


@pytest.mark.unit
@pytest.mark.parametrize(
    ("family", "orientation", "expected"),
    [
        (Family.TILDE, Orientation.VERTICAL, 106.24),
        (Family.TILDE, Orientation.HORIZONTAL, 85.76),
        (Family.HAT, Orientation.HORIZONTAL, 106.24),
        (Family.HAT, Orientation.VERTICAL, 85.76),
    ],
)
def test_pixel_sums(family, orientation, expected):
    image = render(spec(family, orientation, 0.01))
    assert pixel_sum(image) == pytest.approx(expected, rel=1e-12)
    assert expected_pixel_sum(spec(family, orientation, 0.01)) == pytest.approx(expected, rel=1e-12)


@pytest.mark.unit
@pytest.mark.parametrize("family", list(Family))
@pytest.mark.parametrize("orientation", list(Orientation))
def test_zero_a_collapses_both_codes(family, orientation):
    image = render(spec(family, orientation, 0.0))
    assert set(np.unique(image).tolist()) == {0.0, 1.0}
    assert pixel_sum(image) == 96.0
    assert pixel_sum_g(image) == 0
    assert f_orientation(image) == orientation.label


@pytest.mark.unit
def test_orientation_examples():
    assert f_orientation(render(spec(Family.TILDE, Orientation.HORIZONTAL, 0.01))) == 0
    assert f_orientation(render(spec(Family.HAT, Orientation.VERTICAL, 0.007))) == 1


@pytest.mark.unit
@pytest.mark.parametrize("position", range(30))
@pytest.mark.parametrize("orientation", list(Orientation))
@pytest.mark.parametrize("family", list(Family))
def test_orientation_labels_every_stripe(family, orientation, position):
    for a in (0.0, 0.001, 0.007, 0.01, 0.025, 0.05):
        image = render(spec(family, orientation, a, position=position))
        assert f_orientation(image) == orientation.label, a


@pytest.mark.unit
def test_pixel_sum_agrees_on_tilde_and_inverts_on_hat():
    assert pixel_sum_g(render(spec(Family.TILDE, Orientation.VERTICAL, 0.01))) == 1
    assert pixel_sum_g(render(spec(Family.HAT, Orientation.VERTICAL, 0.01))) == 0


@pytest.mark.unit
def test_malformed_images_are_rejected():
    with pytest.raises(MalformedImageError):
        f_orientation(np.zeros((32, 32)))
    image = np.zeros((32, 32))
    image[3:6, :16] = 1.0
    image[10:13, 16:] = 1.0
    with pytest.raises(MalformedImageError):
        f_orientation(image)
    with pytest.raises(MalformedImageError):
        f_orientation(np.zeros((16, 16)))


@pytest.mark.unit
def test_stripe_position_is_validated():
    with pytest.raises(ParameterError):
        spec(Family.TILDE, Orientation.HORIZONTAL, 0.01, position=30)


@pytest.mark.unit
def test_training_set():
    training = enumerate_training_set()
    assert len(training) == 60
    assert training.labels.tolist().count(0) == 30
    assert training.labels.tolist().count(1) == 30
    flat = training.images.reshape(60, -1)
    assert len({row.tobytes() for row in flat}) == 60
    assert np.array_equal(pixel_sum_g_many(training.images), training.labels)
    assert training.as_dataset().inputs.shape == (60, 1, 32, 32)


@pytest.mark.unit
def test_random_images_follow_the_sum_formula(rng):
    specs = [
        StripeSpec(
            orientation=Orientation.VERTICAL if vertical else Orientation.HORIZONTAL,
            position=int(position),
            family=Family.HAT if hat else Family.TILDE,
            a=float(a),
        )
        for vertical, position, hat, a in zip(
            rng.integers(0, 2, 10_000),
            rng.integers(0, 30, 10_000),
            rng.integers(0, 2, 10_000),
            rng.uniform(0, 0.05, 10_000),
            strict=True,
        )
    ]
    images = StripeSet.from_specs(specs).images
    sums = np.array([pixel_sum(image) for image in images])
    expected = np.array([expected_pixel_sum(item) for item in specs])
    assert np.allclose(sums, expected, rtol=1e-9, atol=0)


@pytest.mark.unit
def test_test_sets_baseline(rng):
    b, c = TABLE1_ROWS[0]
    tilde = sample_test_set(Family.TILDE, b, c, 1000, rng)
    hat = sample_test_set(Family.HAT, b, c, 1000, rng)
    assert (pixel_sum_g_many(tilde.images) == tilde.labels).all()
    assert (pixel_sum_g_many(hat.images) != hat.labels).all()
    # 3 sigma of Binomial(1000, 1/2)
    assert abs(tilde.labels.sum() - 500) <= 3 * np.sqrt(250)
    assert all(b <= item.a <= c for item in tilde.specs)


@pytest.mark.unit
def test_test_set_parameters_are_validated(rng):
    with pytest.raises(ParameterError):
        sample_test_set(Family.TILDE, 0.01, 0.009, 10, rng)
    with pytest.raises(ParameterError):
        sample_test_set(Family.TILDE, 0.009, 0.01, 0, rng)


@pytest.mark.unit
def test_swapped_set_changes_only_the_colour_code(rng):
    tilde = sample_test_set(Family.TILDE, 0.009, 0.01, 20, rng)
    hat = tilde.swapped()
    assert np.array_equal(hat.labels, tilde.labels)
    assert all(item.family is Family.HAT for item in hat.specs)
    assert np.abs(hat.images - tilde.images).max() == pytest.approx(2 * max(item.a for item in tilde.specs))


@pytest.mark.unit
def test_test_sets_are_shared_and_reproducible():
    settings = Experiment2Settings(test_size=50)
    first = build_test_sets(settings)
    second = build_test_sets(settings)
    assert [(tests.b, tests.c) for tests in first] == list(TABLE1_ROWS)
    for one, two in zip(first, second, strict=True):
        assert np.array_equal(one.tilde.images, two.tilde.images)
        assert np.array_equal(one.hat.images, two.hat.images)


@pytest.mark.unit
def test_cnn_shapes_and_parameter_count(rng):
    net = build_cnn(rng)
    assert net.output_shape == (1,)
    shapes = [net.input_shape]
    for layer in net.layers:
        shapes.append(layer.output_shape(shapes[-1]))
    assert shapes[3] == (24, 16, 16)
    assert shapes[6] == (48, 8, 8)
    assert net.param_count == (25 * 24 + 24) + (25 * 24 * 48 + 48) + (3072 * 10 + 10) + (10 + 1)
    assert net.param_count == 60213
    logits = net.predict_logits(np.zeros((3, 1, 32, 32)))
    assert logits.shape == (3,)


@pytest.mark.unit
def test_cnn_dense_activation_adds_a_relu(rng):
    assert len(build_cnn(rng, dense_activation=True).layers) == len(build_cnn(rng).layers) + 1


@pytest.mark.unit
def test_pixel_sum_baseline_on_every_row():
    for tests in build_test_sets(Experiment2Settings()):
        assert len(tests.tilde) == 1000
        assert (pixel_sum_g_many(tests.tilde.images) == tests.tilde.labels).all()
        assert (pixel_sum_g_many(tests.hat.images) != tests.hat.labels).all()
