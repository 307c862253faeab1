"""Network"""

import copy
from collections.abc import Iterator
from typing import Any

import numpy as np

from falsestructures.exceptions import DimensionError, StateError
from falsestructures.nn.layers import Layer
from falsestructures.nn.losses import round_half_up, sigmoid
from falsestructures.nn.tensor import Shape, Tensor, as_tensor
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)

DEFAULT_CHUNK_SIZE = 250


class Network:
    """Ordered list of layers mapping inputs of `input_shape` to pre-sigmoid logits

    Inference through forward() is pure. Training records a tape with
    forward(record=True) and consumes it with backward().
    """

    layers: list[Layer]
    input_shape: Shape
    output_shape: Shape

    def __init__(self, layers: list[Layer], input_shape: Shape) -> None:
        self.layers = layers
        self.input_shape = tuple(input_shape)
        shape = self.input_shape
        for index, layer in enumerate(layers):
            if not layer.name:
                layer.name = f"{index}:{layer.kind.value}"
            shape = layer.output_shape(shape)
        self.output_shape = shape
        self._tape: list[Any] | None = None

    @property
    def param_count(self) -> int:
        """Number of trainable scalars"""
        return sum(value.size for layer in self.layers for value in layer.params.values())

    def named_parameters(self) -> Iterator[tuple[str, Tensor]]:
        """Yield (layer.param, array) in declaration order"""
        for index, layer in enumerate(self.layers):
            for key, value in layer.params.items():
                yield f"{index}.{key}", value

    def parameters(self) -> dict[str, Tensor]:
        """Parameter arrays keyed like named_parameters (arrays are shared, not copied)"""
        return dict(self.named_parameters())

    def gradients(self) -> dict[str, Tensor]:
        """Gradient buffers keyed like parameters()"""
        return {f"{index}.{key}": layer.grads[key] for index, layer in enumerate(self.layers) for key in layer.params}

    def _batch(self, x: Tensor) -> tuple[Tensor, bool]:
        x = as_tensor(x)
        if x.shape == self.input_shape:
            return x[np.newaxis], False
        if x.shape[1:] != self.input_shape:
            first = self.layers[0].label() if self.layers else "input"
            raise DimensionError(f"layer {first}: network expects inputs of shape {self.input_shape}, got {x.shape}")
        return x, True

    def forward(self, x: Tensor, record: bool = False) -> Tensor:
        """Return the final logits, shape (N, *output_shape) or output_shape for one sample"""
        batch, batched = self._batch(x)
        tape = []
        out = batch
        for layer in self.layers:
            out, cache = layer.forward(out)
            tape.append(cache)
        if record:
            self._tape = tape
        return out if batched else out[0]

    def backward(self, loss_grad: Tensor) -> dict[str, Tensor]:
        """Back propagate dLoss/dlogits through the recorded tape and return the parameter gradients"""
        if self._tape is None:
            raise StateError("backward called before a recorded forward pass")
        grad = as_tensor(loss_grad)
        for layer, cache in zip(reversed(self.layers), reversed(self._tape), strict=True):
            grad = layer.backward(grad, cache)
        self._tape = None
        return self.gradients()

    def predict_logits(self, x: Tensor, chunk_size: int = DEFAULT_CHUNK_SIZE) -> Tensor:
        """Scalar logits for a batch, computed chunk by chunk"""
        batch, _ = self._batch(x)
        chunks = [self.forward(batch[start : start + chunk_size]) for start in range(0, len(batch), chunk_size)]
        if not chunks:
            return np.zeros(0)
        return np.concatenate(chunks).reshape(len(batch), -1)[:, 0]

    def predict_labels(self, x: Tensor, chunk_size: int = DEFAULT_CHUNK_SIZE) -> np.ndarray:
        """Round sigma(logit) to the nearest label, 0.5 goes to 1"""
        return round_half_up(sigmoid(self.predict_logits(x, chunk_size)))

    def copy(self) -> "Network":
        """Deep copy, tape excluded"""
        clone = copy.deepcopy(self)
        clone._tape = None
        return clone

    def describe(self) -> str:
        """One line summary of the architecture"""
        layers = " -> ".join(f"{layer.kind.value}{layer.hyper() or ''}" for layer in self.layers)
        return f"input{self.input_shape} -> {layers} ({self.param_count} parameters)"
