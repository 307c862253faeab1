"""Labelers with their predicate lists, and classifier adapters"""

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

import numpy as np

from falsestructures.case1.generators import sample_domain
from falsestructures.case1.problem import Case1Problem, f_a_many, false_g_many
from falsestructures.case2.generators import sample_test_set
from falsestructures.case2.images import Family, f_orientation_many, pixel_sum_g_many
from falsestructures.models.constants import TABLE1_ROWS
from falsestructures.nn.network import Network

Labeler = Callable[[np.ndarray], np.ndarray]
DomainSampler = Callable[[np.random.Generator, int], np.ndarray]


@runtime_checkable
class Classifier(Protocol):
    """Anything mapping a batch of domain points to integer labels"""

    def predict_labels(self, x: np.ndarray) -> np.ndarray:
        """Labels of every point of the batch"""
        ...


@dataclass(frozen=True)
class StructureOracle:
    """A labeling function with the predicates describing each label

    labeler maps a batch of points to labels; predicate_descriptions[j] describes label j.
    """

    name: str
    labeler: Labeler = field(repr=False)
    predicate_descriptions: tuple[str, ...]
    domain_sampler: DomainSampler | None = field(default=None, repr=False)

    def label(self, point: np.ndarray) -> int:
        """Label of a single point"""
        return int(self.labeler(np.asarray(point)[np.newaxis])[0])

    def label_many(self, points: np.ndarray) -> np.ndarray:
        """Labels of a batch of points"""
        return np.asarray(self.labeler(np.asarray(points)), dtype=np.int64)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw n domain points"""
        if self.domain_sampler is None:
            raise NotImplementedError(f"oracle {self.name} has no domain sampler")
        return self.domain_sampler(rng, n)


class OracleClassifier:
    """Expose an oracle through the Classifier protocol"""

    def __init__(self, oracle: StructureOracle) -> None:
        self.oracle = oracle

    def predict_labels(self, x: np.ndarray) -> np.ndarray:
        """Labels given by the oracle"""
        return self.oracle.label_many(x)


class NetworkClassifier:
    """Expose a network through the Classifier protocol, reshaping batches to its input shape"""

    def __init__(self, net: Network) -> None:
        self.net = net

    def predict_labels(self, x: np.ndarray) -> np.ndarray:
        """Rounded sigmoid of the network logits"""
        x = np.asarray(x, dtype=np.float64)
        return self.net.predict_labels(x.reshape((len(x), *self.net.input_shape)))


def case1_original_oracle(p: Case1Problem) -> StructureOracle:
    """f_a with the parity predicates, sampled on [b, 1] x [0, 1]"""
    return StructureOracle(
        name="f_a",
        labeler=lambda points: f_a_many(p, points[:, 0]),
        predicate_descriptions=("ceil(a / x1) is even", "ceil(a / x1) is odd"),
        domain_sampler=lambda rng, n: sample_domain(p, n, rng),
    )


def case1_false_oracle(p: Case1Problem) -> StructureOracle:
    """g(x) = [x2 != 0], sampled on C_0 so that witnesses have x2 = 0"""
    return StructureOracle(
        name="g_x2",
        labeler=lambda points: false_g_many(points[:, 1]),
        predicate_descriptions=("x2 is 0", "x2 is not 0"),
        domain_sampler=lambda rng, n: sample_domain(p, n, rng, x2_zero=True),
    )


def _stripe_sampler(family: Family, b: float, c: float) -> DomainSampler:
    return lambda rng, n: sample_test_set(family, b, c, n, rng).images


def case2_original_oracle(
    family: Family = Family.TILDE, b: float | None = None, c: float | None = None
) -> StructureOracle:
    """Stripe orientation read from the image geometry"""
    b = TABLE1_ROWS[0][0] if b is None else b
    c = TABLE1_ROWS[0][1] if c is None else c
    return StructureOracle(
        name="orientation",
        labeler=f_orientation_many,
        predicate_descriptions=("x has a light horizontal stripe", "x has a light vertical stripe"),
        domain_sampler=_stripe_sampler(family, b, c),
    )


def case2_false_oracle(
    family: Family = Family.HAT, b: float | None = None, c: float | None = None
) -> StructureOracle:
    """Pixel sum above 96, sampled by default on the hat family where it disagrees with the orientation"""
    b = TABLE1_ROWS[0][0] if b is None else b
    c = TABLE1_ROWS[0][1] if c is None else c
    return StructureOracle(
        name="pixel_sum",
        labeler=pixel_sum_g_many,
        predicate_descriptions=("the pixel sum of x is <= 96", "the pixel sum of x is > 96"),
        domain_sampler=_stripe_sampler(family, b, c),
    )
