"""Binary cross entropy on logits

C(v, w) = sum_j -w_j log(sigma(v_j)) - (1 - w_j) log(1 - sigma(v_j)), evaluated through the
overflow free form log(1 + exp(-|v|)) + max(v, 0) - v w.
"""

from typing import Literal

import numpy as np

from falsestructures.exceptions import DimensionError, DomainError
from falsestructures.nn.tensor import Tensor, as_tensor

Reduction = Literal["sum", "mean"]


def sigmoid(x: Tensor) -> Tensor:
    """Logistic function without overflow for large |x|"""
    z = np.exp(-np.abs(x))
    return np.where(x >= 0.0, 1.0 / (1.0 + z), z / (1.0 + z))


def round_half_up(probabilities: Tensor) -> Tensor:
    """Nearest integer rounding with sigma(v) = 0.5 mapped to 1"""
    return (probabilities >= 0.5).astype(np.int64)


def _check(logits: Tensor, labels: Tensor) -> tuple[Tensor, Tensor]:
    v = as_tensor(logits).reshape(-1)
    w = as_tensor(labels).reshape(-1)
    if v.shape != w.shape:
        raise DimensionError(f"bce_loss: {v.size} logits for {w.size} labels")
    if not np.isin(w, (0.0, 1.0)).all():
        raise DomainError("bce_loss: labels must be 0 or 1")
    return v, w


def bce_terms(logits: Tensor, labels: Tensor) -> Tensor:
    """Per-sample cross entropy terms"""
    v, w = _check(logits, labels)
    return np.log1p(np.exp(-np.abs(v))) + np.maximum(v, 0.0) - v * w


def bce_loss(logits: Tensor, labels: Tensor, reduction: Reduction = "sum") -> float:
    """Cross entropy of the logits against binary labels (summed unless reduction is "mean")"""
    terms = bce_terms(logits, labels)
    total = float(terms.sum())
    return total / terms.size if reduction == "mean" else total


def bce_grad(logits: Tensor, labels: Tensor, reduction: Reduction = "sum") -> Tensor:
    """dC/dv = sigma(v) - w, shaped like the logits"""
    v, w = _check(logits, labels)
    grad = sigmoid(v) - w
    if reduction == "mean":
        grad = grad / v.size
    return grad.reshape(np.shape(logits))
