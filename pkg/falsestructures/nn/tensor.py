"""Tensor conventions

A tensor is a float64 numpy array. Batched tensors carry the sample index on axis 0,
image tensors are laid out as (N, C, H, W).
"""

import numpy as np
import numpy.typing as npt

Tensor = npt.NDArray[np.float64]
Shape = tuple[int, ...]


def as_tensor(values: npt.ArrayLike) -> Tensor:
    """Return values as a contiguous float64 array"""
    return np.ascontiguousarray(values, dtype=np.float64)
