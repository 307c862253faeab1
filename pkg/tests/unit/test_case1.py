import math
import re

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from falsestructures.case1.generators import (
    Lift,
    diagnostic_sets,
    interval_counts,
    sample_domain,
    sample_stable_region,
    sample_training_set,
)
from falsestructures.case1.problem import (
    Case1Problem,
    distance_to_discontinuity,
    exact_c0_severity,
    f_a_eval,
    f_a_many,
    false_g_eval,
    stable_region,
)
from falsestructures.case1.stable_network import build_stable_network, certify_stable_network, logit_scale
from falsestructures.exceptions import ConstructionError, DomainError, ParameterError
from falsestructures.nn.losses import bce_loss


@pytest.mark.unit
@pytest.mark.parametrize(("a", "x1", "expected"), [(20, 1.0, 0), (20, 0.97, 1), (1, 1.0, 1)])
def test_f_a_examples(a, x1, expected):
    assert f_a_eval(Case1Problem(a=a, K=a + 6, epsilon=1e-4, delta=1e-5), x1) == expected


@pytest.mark.unit
def test_f_a_rejects_non_positive_x1(problem):
    with pytest.raises(DomainError):
        f_a_eval(problem, 0.0)
    with pytest.raises(DomainError):
        f_a_many(problem, np.array([0.5, -1.0]))


@pytest.mark.unit
def test_f_a_many_matches_scalar(problem, rng):
    x1 = rng.uniform(problem.b, 1.0, size=200)
    assert [f_a_eval(problem, value) for value in x1] == f_a_many(problem, x1).tolist()


@pytest.mark.unit
@pytest.mark.parametrize(
    ("changes", "constraint"),
    [({"a": 26}, "a < K"), ({"epsilon": 0.02}, "ε < b²/(2(a−b))"), ({"delta": 0.01}, "0 < δ < ε")],
)
def test_invalid_problems_are_not_constructible(changes, constraint):
    with pytest.raises(ConstructionError, match=re.escape(constraint)):
        Case1Problem(**changes)


@pytest.mark.unit
def test_epsilon_bound(problem):
    assert problem.b == pytest.approx(20 / 27)
    assert problem.epsilon_bound == pytest.approx(0.014245, abs=1e-6)


@pytest.mark.unit
def test_stable_region_intervals(problem):
    region = stable_region(problem)
    assert len(region) == 7
    assert region.ks[0] == 26
    assert region.intervals[0] == pytest.approx((20 / 27 + 0.01, 20 / 26 - 0.01))
    assert region.intervals[0][0] == pytest.approx(0.75074, abs=1e-5)
    assert region.intervals[-1] == pytest.approx((20 / 21 + 0.01, 0.99))
    assert all(lo < hi for lo, hi in region.intervals)


@pytest.mark.unit
def test_f_a_is_constant_and_away_from_jumps_on_each_interval(problem, rng):
    region = stable_region(problem)
    for lo, hi in region.intervals:
        x1 = rng.uniform(lo, hi, size=50)
        assert len(set(f_a_many(problem, x1).tolist())) == 1
        assert (distance_to_discontinuity(problem, x1) >= problem.epsilon - 1e-12).all()


@pytest.mark.unit
@pytest.mark.parametrize(("x2", "expected"), [(0.0, 0), (1e-4, 1), (-1e-300, 1)])
def test_false_g(x2, expected):
    assert false_g_eval(x2) == expected


@pytest.mark.unit
def test_delta_lift(problem, rng):
    points = sample_training_set(problem, 5000, Lift.DELTA, rng)
    assert (points.points[points.labels == 1, 1] == 1e-4).all()
    assert (points.points[points.labels == 0, 1] == 0.0).all()
    assert stable_region(problem).contains(points.points[:, 0]).all()


@pytest.mark.unit
def test_zero_lift(problem, rng):
    points = sample_training_set(problem, 100, Lift.ZERO, rng)
    assert (points.points[:, 1] == 0.0).all()
    assert points.labels.tolist() == f_a_many(problem, points.points[:, 0]).tolist()


@pytest.mark.unit
def test_seven_samples_land_in_seven_intervals(problem, rng):
    points = sample_training_set(problem, 7, Lift.DELTA, rng)
    assert sorted(points.interval_index.tolist()) == list(range(7))
    assert sorted(set(stable_region(problem).index_of(points.points[:, 0]).tolist())) == list(range(7))
    assert [point.label for point in points.to_points()] == points.labels.tolist()


@pytest.mark.unit
def test_one_per_interval_needs_matching_size(problem, rng):
    with pytest.raises(ParameterError):
        sample_training_set(problem, 8, Lift.DELTA, rng, one_per_interval=True)
    with pytest.raises(ParameterError):
        sample_training_set(problem, 0, Lift.DELTA, rng)


@pytest.mark.unit
@settings(max_examples=50, deadline=None)
@given(total=st.integers(0, 10_000), intervals=st.integers(1, 12), seed=st.integers(0, 2**32 - 1))
def test_interval_counts_are_balanced(total, intervals, seed):
    counts = interval_counts(total, intervals, np.random.default_rng(seed))
    assert counts.sum() == total
    assert counts.max() - counts.min() <= 1


@pytest.mark.unit
def test_samplers_stay_in_their_domain(problem, rng):
    stable = sample_stable_region(problem, 1000, rng)
    assert stable_region(problem).contains(stable[:, 0]).all()
    assert ((stable[:, 1] >= 0) & (stable[:, 1] <= 1)).all()
    domain = sample_domain(problem, 1000, rng, x2_zero=True)
    assert (domain[:, 1] == 0).all()
    assert ((domain[:, 0] >= problem.b) & (domain[:, 0] <= 1)).all()


@pytest.mark.unit
def test_diagnostic_sets(problem):
    sets = diagnostic_sets(problem, 2000)
    assert (sets.c0[:, 1] == 0).all()
    assert set(np.unique(sets.cdelta[:, 1]).tolist()) <= {0.0, 1e-4}
    assert np.array_equal(sets.c0[:, 0], sets.cdelta[:, 0])
    region = stable_region(problem)
    brute = sum(int(any(lo < x < hi for lo, hi in region.intervals)) for x in sets.x1)
    assert sets.in_stable.sum() == brute
    with pytest.raises(ParameterError):
        diagnostic_sets(problem, 1)


@pytest.mark.unit
def test_exact_c0_severity_matches_interval_lengths(problem):
    odd = sum(20 / k - 20 / (k + 1) for k in range(20, 27) if (k + 1) % 2 == 1)
    assert exact_c0_severity(problem) == pytest.approx(odd / (1 - 20 / 27))


@pytest.mark.unit
def test_logit_scale(problem):
    n = logit_scale(1e-3, 7)
    assert n == pytest.approx(math.log(6999.5), abs=1e-3)
    assert -math.log(1 / (1 + math.exp(-n))) * 7 <= 1e-3
    with pytest.raises(ConstructionError):
        logit_scale(0.0, 7)


@pytest.mark.unit
def test_stable_network_examples(problem):
    net = build_stable_network(problem, 1e-3, 7)
    n = logit_scale(1e-3, 7)
    logits = net.predict_logits(np.array([[0.99, 0.3], [0.97, 0.5], [1.0, 0.0]]))
    assert logits[0] >= 8.85
    assert logits[1] == pytest.approx(n)
    assert logits[2] == pytest.approx(-n)
    assert net.layers[0].params["weight"].shape == (4 * 26, 2)
    assert not net.layers[0].params["weight"][:, 1].any()


@pytest.mark.unit
def test_stable_network_logits_are_saturated(problem, rng):
    net = build_stable_network(problem, 1e-3, 7)
    points = sample_stable_region(problem, 10_000, rng)
    logits = net.predict_logits(points)
    n = logit_scale(1e-3, 7)
    assert (np.abs(logits) >= n * (1 - 1e-9)).all()
    labels = f_a_many(problem, points[:, 0])
    assert np.array_equal(net.predict_labels(points), labels)
    subset = rng.choice(len(points), size=7, replace=False)
    assert bce_loss(logits[subset], labels[subset].astype(float)) <= 1e-3


@pytest.mark.unit
def test_stable_certificate_holds(problem):
    net = build_stable_network(problem, 1e-3, 7)
    certificate = certify_stable_network(problem, net, 1e-3, 7, np.random.default_rng(0))
    assert certificate.errors == 0
    assert certificate.max_subset_loss <= 1e-3
    assert certificate.holds
