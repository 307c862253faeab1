"""Stripe classifier architecture"""

import numpy as np

from falsestructures.models.constants import IMAGE_SIZE
from falsestructures.nn.layers import Conv2d, Dense, Layer, MaxPool2d, ReLU
from falsestructures.nn.network import Network
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)

KERNEL_SIZE = 5
FIRST_FILTERS = 24
SECOND_FILTERS = 48
DENSE_UNITS = 10


def build_cnn(rng: np.random.Generator, dense_activation: bool = False) -> Network:
    """Conv(24) -> ReLU -> Pool -> Conv(48) -> ReLU -> Pool -> Dense(10) -> Dense(1), Glorot init

    Args:
        rng (np.random.Generator): initialisation stream
        dense_activation (bool): insert a ReLU between the two dense layers
    """
    pooled = IMAGE_SIZE // 4
    layers: list[Layer] = [
        Conv2d(1, FIRST_FILTERS, KERNEL_SIZE, rng=rng),
        ReLU(),
        MaxPool2d(2),
        Conv2d(FIRST_FILTERS, SECOND_FILTERS, KERNEL_SIZE, rng=rng),
        ReLU(),
        MaxPool2d(2),
        Dense(SECOND_FILTERS * pooled * pooled, DENSE_UNITS, rng=rng),
    ]
    if dense_activation:
        layers.append(ReLU())
    layers.append(Dense(DENSE_UNITS, 1, rng=rng))
    net = Network(layers, (1, IMAGE_SIZE, IMAGE_SIZE))
    logger.debug("CNN built: %s", net.describe())
    return net
