"""Stripe images and their two labelers

A 32x32 image carries one light stripe, three rows (horizontal) or three columns (vertical)
wide. Two colour codes fix the pixel values:

    family  orientation  stripe  background  pixel sum
    tilde   horizontal   1 - a   -a          96 - 1024 a
    tilde   vertical     1 + a   a           96 + 1024 a
    hat     horizontal   1 + a   a           96 + 1024 a
    hat     vertical     1 - a   -a          96 - 1024 a

On the tilde family the pixel sum decides the orientation, on the hat family it inverts it.
"""

import math
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from falsestructures.exceptions import MalformedImageError, ParameterError
from falsestructures.models.constants import (
    IMAGE_SIZE,
    PIXEL_SUM_THRESHOLD,
    STRIPE_PIXELS,
    STRIPE_POSITIONS,
    STRIPE_WIDTH,
)

GrayImage = np.ndarray


class Orientation(str, Enum):
    """Stripe direction, value order gives the label"""

    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"

    @property
    def label(self) -> int:
        """0 for horizontal, 1 for vertical"""
        return 0 if self is Orientation.HORIZONTAL else 1


class Family(str, Enum):
    """Colour code"""

    TILDE = "tilde"
    HAT = "hat"

    def other(self) -> "Family":
        """The opposite colour code"""
        return Family.HAT if self is Family.TILDE else Family.TILDE


class StripeSpec(BaseModel):
    """Everything needed to render one image"""

    model_config = ConfigDict(frozen=True)

    orientation: Orientation
    position: int
    family: Family
    a: float = Field(ge=0)

    @model_validator(mode="after")
    def _check_position(self) -> "StripeSpec":
        if not 0 <= self.position < STRIPE_POSITIONS:
            raise ParameterError(f"stripe position {self.position} outside [0, {STRIPE_POSITIONS - 1}]")
        return self

    def swapped(self) -> "StripeSpec":
        """Same stripe rendered with the other colour code"""
        return self.model_copy(update={"family": self.family.other()})


def color_values(spec: StripeSpec) -> tuple[float, float]:
    """(stripe, background) values of the spec's colour code"""
    bright = (spec.family is Family.TILDE) == (spec.orientation is Orientation.VERTICAL)
    if bright:
        return 1.0 + spec.a, spec.a
    return 1.0 - spec.a, -spec.a


def render(spec: StripeSpec) -> GrayImage:
    """32x32 image of the spec"""
    stripe, background = color_values(spec)
    img = np.full((IMAGE_SIZE, IMAGE_SIZE), background)
    band = slice(spec.position, spec.position + STRIPE_WIDTH)
    if spec.orientation is Orientation.HORIZONTAL:
        img[band, :] = stripe
    else:
        img[:, band] = stripe
    return img


def render_many(specs: list[StripeSpec]) -> np.ndarray:
    """Stack of rendered images, shape (n, 32, 32)"""
    if not specs:
        return np.zeros((0, IMAGE_SIZE, IMAGE_SIZE))
    return np.stack([render(spec) for spec in specs])


def expected_pixel_sum(spec: StripeSpec) -> float:
    """Closed form pixel sum: 96 +- 1024 a"""
    _, background = color_values(spec)
    return STRIPE_PIXELS + IMAGE_SIZE**2 * background


def _contiguous(index: np.ndarray) -> bool:
    return len(index) == STRIPE_WIDTH and index[-1] - index[0] == STRIPE_WIDTH - 1


def f_orientation(img: GrayImage) -> int:
    """0 if the light stripe is horizontal, 1 if vertical, read from the geometry alone"""
    img = np.asarray(img, dtype=np.float64)
    if img.shape != (IMAGE_SIZE, IMAGE_SIZE):
        raise MalformedImageError(f"expected a {IMAGE_SIZE}x{IMAGE_SIZE} image, got shape {img.shape}")
    values, counts = np.unique(img, return_counts=True)
    if len(values) != 2:
        raise MalformedImageError(f"expected two pixel values (stripe and background), found {len(values)}")
    background = values[np.argmax(counts)]
    stripe = values[np.argmin(counts)]
    if counts.min() != STRIPE_PIXELS or not stripe > background:
        raise MalformedImageError(
            f"no light stripe: {counts.min()} pixels of value {stripe} over background {background}"
        )
    mask = img == stripe
    if _contiguous(np.flatnonzero(mask.all(axis=1))):
        return Orientation.HORIZONTAL.label
    if _contiguous(np.flatnonzero(mask.all(axis=0))):
        return Orientation.VERTICAL.label
    raise MalformedImageError("stripe pixels do not form three adjacent full rows or columns")


def f_orientation_many(images: np.ndarray) -> np.ndarray:
    """f_orientation over a stack of images"""
    stack = np.asarray(images).reshape(-1, IMAGE_SIZE, IMAGE_SIZE)
    return np.array([f_orientation(img) for img in stack], dtype=np.int64)


def pixel_sum(img: GrayImage) -> float:
    """Compensated sum of all pixels"""
    return math.fsum(np.asarray(img, dtype=np.float64).ravel())


def pixel_sum_g(img: GrayImage) -> int:
    """1 iff the pixel sum exceeds 96"""
    return 1 if pixel_sum(img) > PIXEL_SUM_THRESHOLD else 0


def pixel_sum_g_many(images: np.ndarray) -> np.ndarray:
    """pixel_sum_g over a stack of images"""
    stack = np.asarray(images).reshape(-1, IMAGE_SIZE, IMAGE_SIZE)
    return np.array([pixel_sum_g(img) for img in stack], dtype=np.int64)
