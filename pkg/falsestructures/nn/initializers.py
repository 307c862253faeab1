"""Weight initializers"""

import math

import numpy as np

from falsestructures.nn.tensor import Shape, Tensor


def fans(shape: Shape) -> tuple[int, int]:
    """Return (fan_in, fan_out) of a weight shape

    Dense weights are (out_dim, in_dim); convolution kernels are (filters, channels, kh, kw)
    and count the receptive field on both sides.
    """
    if len(shape) == 2:
        return shape[1], shape[0]
    if len(shape) > 2:
        receptive_field = math.prod(shape[2:])
        return shape[1] * receptive_field, shape[0] * receptive_field
    size = math.prod(shape) if shape else 1
    return size, size


def glorot_limit(shape: Shape) -> float:
    """L = sqrt(6 / (fan_in + fan_out))"""
    fan_in, fan_out = fans(shape)
    return math.sqrt(6.0 / (fan_in + fan_out))


def glorot_uniform_init(shape: Shape, rng: np.random.Generator) -> Tensor:
    """Draw i.i.d. uniform weights on [-L, L]"""
    limit = glorot_limit(shape)
    return rng.uniform(-limit, limit, size=shape)


def zeros_init(shape: Shape) -> Tensor:
    """Bias initializer"""
    return np.zeros(shape, dtype=np.float64)
