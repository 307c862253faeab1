"""Layers

Every layer works on batched tensors. forward() returns the output together with the
cache backward() needs, so a forward pass never mutates the layer.
"""

from abc import abstractmethod
from enum import Enum
from math import prod
from typing import Any

import numpy as np

from falsestructures.exceptions import DimensionError, ParameterError
from falsestructures.nn.initializers import glorot_uniform_init, zeros_init
from falsestructures.nn.losses import sigmoid
from falsestructures.nn.tensor import Shape, Tensor


class LayerKind(str, Enum):
    """The five supported layer kinds"""

    DENSE = "dense"
    CONV2D = "conv2d"
    MAXPOOL2D = "maxpool2d"
    RELU = "relu"
    SIGMOID = "sigmoid"


class Layer:
    """One layer of a network"""

    kind: LayerKind
    name: str = ""
    params: dict[str, Tensor]
    grads: dict[str, Tensor]

    def __init__(self) -> None:
        self.params = {}
        self.grads = {}

    @abstractmethod
    def output_shape(self, input_shape: Shape) -> Shape:
        """Per-sample output shape for a per-sample input shape, raises DimensionError"""

    @abstractmethod
    def forward(self, x: Tensor) -> tuple[Tensor, Any]:
        """Compute the layer output and the cache used by backward"""

    @abstractmethod
    def backward(self, dout: Tensor, cache: Any) -> Tensor:
        """Store parameter gradients in self.grads and return the input gradient"""

    def hyper(self) -> dict[str, int]:
        """Hyperparameters needed to rebuild the layer"""
        return {}

    def label(self) -> str:
        """Human readable identifier used in error messages"""
        return self.name or self.kind.value

    def _dimension_error(self, message: str) -> DimensionError:
        return DimensionError(f"layer {self.label()} ({self.kind.value}): {message}")

    def zero_grad(self) -> None:
        """Reset gradient buffers"""
        for key, value in self.params.items():
            self.grads[key] = np.zeros_like(value)


class Dense(Layer):
    """Affine layer y = W x + b, inputs are flattened per sample"""

    kind = LayerKind.DENSE

    def __init__(self, in_dim: int, out_dim: int, rng: np.random.Generator | None = None) -> None:
        super().__init__()
        if in_dim < 1 or out_dim < 1:
            raise ParameterError(f"Dense dimensions must be positive, got ({out_dim}, {in_dim})")
        self.in_dim = in_dim
        self.out_dim = out_dim
        weight = glorot_uniform_init((out_dim, in_dim), rng) if rng is not None else zeros_init((out_dim, in_dim))
        self.params = {"weight": weight, "bias": zeros_init((out_dim,))}
        self.zero_grad()

    def output_shape(self, input_shape: Shape) -> Shape:
        if prod(input_shape) != self.in_dim:
            raise self._dimension_error(f"expects {self.in_dim} input features, got shape {input_shape}")
        return (self.out_dim,)

    def forward(self, x: Tensor) -> tuple[Tensor, Any]:
        flat = x.reshape(x.shape[0], -1)
        if flat.shape[1] != self.in_dim:
            raise self._dimension_error(f"expects {self.in_dim} input features, got shape {x.shape[1:]}")
        out = flat @ self.params["weight"].T + self.params["bias"]
        return out, (flat, x.shape)

    def backward(self, dout: Tensor, cache: Any) -> Tensor:
        flat, in_shape = cache
        self.grads["weight"] = dout.T @ flat
        self.grads["bias"] = dout.sum(axis=0)
        return (dout @ self.params["weight"]).reshape(in_shape)

    def hyper(self) -> dict[str, int]:
        return {"in_dim": self.in_dim, "out_dim": self.out_dim}


def _im2col_indices(channels: int, height: int, width: int, kernel: int) -> tuple[Tensor, Tensor, Tensor]:
    """Gather indices turning every kernel window of a padded image into one column"""
    out_h = height
    out_w = width
    i0 = np.tile(np.repeat(np.arange(kernel), kernel), channels)
    i1 = np.repeat(np.arange(out_h), out_w)
    j0 = np.tile(np.arange(kernel), kernel * channels)
    j1 = np.tile(np.arange(out_w), out_h)
    rows = i0.reshape(-1, 1) + i1.reshape(1, -1)
    cols = j0.reshape(-1, 1) + j1.reshape(1, -1)
    chans = np.repeat(np.arange(channels), kernel * kernel).reshape(-1, 1)
    return chans, rows, cols


class Conv2d(Layer):
    """2D convolution, stride 1, "same" zero padding, square odd kernel"""

    kind = LayerKind.CONV2D

    def __init__(
        self, in_channels: int, filters: int, kernel_size: int = 5, rng: np.random.Generator | None = None
    ) -> None:
        super().__init__()
        if kernel_size < 1 or kernel_size % 2 == 0:
            raise ParameterError(f"Conv2d needs an odd kernel size for same padding, got {kernel_size}")
        if in_channels < 1 or filters < 1:
            raise ParameterError(f"Conv2d channel counts must be positive, got ({in_channels}, {filters})")
        self.in_channels = in_channels
        self.filters = filters
        self.kernel_size = kernel_size
        self.pad = (kernel_size - 1) // 2
        shape = (filters, in_channels, kernel_size, kernel_size)
        self.params = {
            "weight": glorot_uniform_init(shape, rng) if rng is not None else zeros_init(shape),
            "bias": zeros_init((filters,)),
        }
        self.zero_grad()

    def output_shape(self, input_shape: Shape) -> Shape:
        if len(input_shape) != 3 or input_shape[0] != self.in_channels:
            raise self._dimension_error(f"expects ({self.in_channels}, H, W) inputs, got {input_shape}")
        _, height, width = input_shape
        if height < self.kernel_size or width < self.kernel_size:
            raise self._dimension_error(f"spatial size {height}x{width} is smaller than the kernel")
        return (self.filters, height, width)

    def forward(self, x: Tensor) -> tuple[Tensor, Any]:
        if x.ndim != 4 or x.shape[1] != self.in_channels:
            raise self._dimension_error(f"expects (N, {self.in_channels}, H, W) inputs, got {x.shape}")
        n, channels, height, width = x.shape
        pad = self.pad
        padded = np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad)), mode="constant")
        indices = _im2col_indices(channels, height, width, self.kernel_size)
        chans, rows, cols = indices
        columns = padded[:, chans, rows, cols]
        kernel_matrix = self.params["weight"].reshape(self.filters, -1)
        out = np.matmul(kernel_matrix, columns) + self.params["bias"].reshape(1, -1, 1)
        return out.reshape(n, self.filters, height, width), (columns, indices, x.shape)

    def backward(self, dout: Tensor, cache: Any) -> Tensor:
        columns, (chans, rows, cols), in_shape = cache
        n, _, height, width = in_shape
        dflat = dout.reshape(n, self.filters, -1)
        self.grads["bias"] = dflat.sum(axis=(0, 2))
        self.grads["weight"] = np.tensordot(dflat, columns, axes=([0, 2], [0, 2])).reshape(self.params["weight"].shape)
        kernel_matrix = self.params["weight"].reshape(self.filters, -1)
        dcolumns = np.matmul(kernel_matrix.T, dflat)
        pad = self.pad
        dpadded = np.zeros((n, self.in_channels, height + 2 * pad, width + 2 * pad))
        np.add.at(dpadded, (slice(None), chans, rows, cols), dcolumns)
        return dpadded[:, :, pad : pad + height, pad : pad + width]

    def hyper(self) -> dict[str, int]:
        return {"in_channels": self.in_channels, "filters": self.filters, "kernel_size": self.kernel_size}


class MaxPool2d(Layer):
    """Non overlapping max pooling, output size is ceil(input / pool)"""

    kind = LayerKind.MAXPOOL2D

    def __init__(self, pool_size: int = 2) -> None:
        super().__init__()
        if pool_size < 1:
            raise ParameterError(f"pool size must be positive, got {pool_size}")
        self.pool_size = pool_size

    def output_shape(self, input_shape: Shape) -> Shape:
        if len(input_shape) != 3:
            raise self._dimension_error(f"expects (C, H, W) inputs, got {input_shape}")
        channels, height, width = input_shape
        return (channels, -(-height // self.pool_size), -(-width // self.pool_size))

    def forward(self, x: Tensor) -> tuple[Tensor, Any]:
        if x.ndim != 4:
            raise self._dimension_error(f"expects (N, C, H, W) inputs, got {x.shape}")
        p = self.pool_size
        n, channels, height, width = x.shape
        out_h, out_w = -(-height // p), -(-width // p)
        pad = ((0, 0), (0, 0), (0, out_h * p - height), (0, out_w * p - width))
        padded = np.pad(x, pad, mode="constant", constant_values=-np.inf)
        windows = padded.reshape(n, channels, out_h, p, out_w, p).transpose(0, 1, 2, 4, 3, 5)
        windows = windows.reshape(n, channels, out_h, out_w, p * p)
        argmax = windows.argmax(axis=-1)[..., np.newaxis]
        out = np.take_along_axis(windows, argmax, axis=-1)[..., 0]
        return out, (argmax, x.shape)

    def backward(self, dout: Tensor, cache: Any) -> Tensor:
        argmax, in_shape = cache
        p = self.pool_size
        n, channels, height, width = in_shape
        out_h, out_w = dout.shape[2], dout.shape[3]
        dwindows = np.zeros((n, channels, out_h, out_w, p * p))
        np.put_along_axis(dwindows, argmax, dout[..., np.newaxis], axis=-1)
        dpadded = dwindows.reshape(n, channels, out_h, out_w, p, p).transpose(0, 1, 2, 4, 3, 5)
        return dpadded.reshape(n, channels, out_h * p, out_w * p)[:, :, :height, :width]

    def hyper(self) -> dict[str, int]:
        return {"pool_size": self.pool_size}


class ReLU(Layer):
    """rho(t) = max(0, t)"""

    kind = LayerKind.RELU

    def output_shape(self, input_shape: Shape) -> Shape:
        return input_shape

    def forward(self, x: Tensor) -> tuple[Tensor, Any]:
        return np.maximum(x, 0.0), x

    def backward(self, dout: Tensor, cache: Any) -> Tensor:
        return dout * (cache > 0.0)


class Sigmoid(Layer):
    """Logistic activation"""

    kind = LayerKind.SIGMOID

    def output_shape(self, input_shape: Shape) -> Shape:
        return input_shape

    def forward(self, x: Tensor) -> tuple[Tensor, Any]:
        out = sigmoid(x)
        return out, out

    def backward(self, dout: Tensor, cache: Any) -> Tensor:
        return dout * cache * (1.0 - cache)


def build_layer(kind: LayerKind, hyper: dict[str, int]) -> Layer:
    """Rebuild a layer (zero parameters) from its kind and hyperparameters"""
    match kind:
        case LayerKind.DENSE:
            return Dense(hyper["in_dim"], hyper["out_dim"])
        case LayerKind.CONV2D:
            return Conv2d(hyper["in_channels"], hyper["filters"], hyper["kernel_size"])
        case LayerKind.MAXPOOL2D:
            return MaxPool2d(hyper["pool_size"])
        case LayerKind.RELU:
            return ReLU()
        case LayerKind.SIGMOID:
            return Sigmoid()
    raise ParameterError(f"Unknown layer kind {kind}")
