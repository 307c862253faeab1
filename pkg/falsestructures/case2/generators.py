"""Stripe image sets"""

from dataclasses import dataclass

import numpy as np

from falsestructures.case2.images import Family, Orientation, StripeSpec, f_orientation_many, render_many
from falsestructures.exceptions import ParameterError
from falsestructures.models.constants import STRIPE_POSITIONS, TRAINING_A
from falsestructures.nn.training import Dataset


@dataclass(frozen=True)
class StripeSet:
    """Specs with their rendered images (n, 32, 32) and orientation labels"""

    specs: tuple[StripeSpec, ...]
    images: np.ndarray
    labels: np.ndarray

    def __len__(self) -> int:
        return len(self.specs)

    @classmethod
    def from_specs(cls, specs: list[StripeSpec]) -> "StripeSet":
        """Render specs and label them geometrically"""
        images = render_many(specs)
        return cls(specs=tuple(specs), images=images, labels=f_orientation_many(images))

    def swapped(self) -> "StripeSet":
        """Same stripes in the other colour code"""
        return StripeSet.from_specs([spec.swapped() for spec in self.specs])

    def as_dataset(self) -> Dataset:
        """Single channel inputs (n, 1, 32, 32) with float labels"""
        return Dataset(inputs=self.images[:, np.newaxis], labels=self.labels.astype(np.float64))


def enumerate_training_set(a: float = TRAINING_A, family: Family = Family.TILDE) -> StripeSet:
    """All 60 stripes of one colour code: horizontal by position, then vertical by position"""
    specs = [
        StripeSpec(orientation=orientation, position=position, family=family, a=a)
        for orientation in (Orientation.HORIZONTAL, Orientation.VERTICAL)
        for position in range(STRIPE_POSITIONS)
    ]
    return StripeSet.from_specs(specs)


def sample_test_set(family: Family, b: float, c: float, n: int, rng: np.random.Generator) -> StripeSet:
    """n stripes with fair orientation, uniform position and a ~ Uniform[b, c]

    Args:
        family (Family): colour code
        b (float): lower end of the a range, > 0
        c (float): upper end of the a range, > b
        n (int): number of images
        rng (np.random.Generator): sampling stream
    """
    if not 0 < b < c:
        raise ParameterError(f"test set range needs 0 < b < c, got b={b}, c={c}")
    if n < 1:
        raise ParameterError(f"test set size must be >= 1, got {n}")
    vertical = rng.integers(0, 2, size=n).astype(bool)
    positions = rng.integers(0, STRIPE_POSITIONS, size=n)
    values = rng.uniform(b, c, size=n)
    specs = [
        StripeSpec(
            orientation=Orientation.VERTICAL if is_vertical else Orientation.HORIZONTAL,
            position=int(position),
            family=family,
            a=float(a),
        )
        for is_vertical, position, a in zip(vertical, positions, values, strict=True)
    ]
    return StripeSet.from_specs(specs)
