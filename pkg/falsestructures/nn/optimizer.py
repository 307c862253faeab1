"""Adam optimizer"""

from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, Field

from falsestructures.exceptions import DimensionError
from falsestructures.models.constants import ADAM_BETA1, ADAM_BETA2, ADAM_EPSILON, ADAM_LR
from falsestructures.nn.tensor import Tensor


class AdamHyperParameters(BaseModel):
    """Adam constants"""

    lr: float = Field(default=ADAM_LR, gt=0)
    beta1: float = Field(default=ADAM_BETA1, ge=0, lt=1)
    beta2: float = Field(default=ADAM_BETA2, ge=0, lt=1)
    epsilon: float = Field(default=ADAM_EPSILON, gt=0)


@dataclass
class AdamState:
    """Moment buffers and step counter of one Adam run"""

    hyper: AdamHyperParameters = field(default_factory=AdamHyperParameters)
    t: int = 0
    m: dict[str, Tensor] = field(default_factory=dict)
    v: dict[str, Tensor] = field(default_factory=dict)

    @classmethod
    def for_parameters(cls, params: dict[str, Tensor], hyper: AdamHyperParameters | None = None) -> "AdamState":
        """Zero moments shaped like params"""
        return cls(
            hyper=hyper or AdamHyperParameters(),
            m={name: np.zeros_like(value) for name, value in params.items()},
            v={name: np.zeros_like(value) for name, value in params.items()},
        )


def adam_step(state: AdamState, params: dict[str, Tensor], grads: dict[str, Tensor]) -> dict[str, Tensor]:
    """Apply one bias corrected Adam update in place and return params

    Args:
        state (AdamState): moments, updated in place, t is incremented
        params (dict[str, Tensor]): parameter arrays, updated in place
        grads (dict[str, Tensor]): gradients with the same keys and shapes
    """
    for name, value in params.items():
        if name not in grads or grads[name].shape != value.shape:
            raise DimensionError(f"adam_step: gradient for {name} missing or misshaped")
        if name not in state.m:
            state.m[name] = np.zeros_like(value)
            state.v[name] = np.zeros_like(value)
        elif state.m[name].shape != value.shape:
            raise DimensionError(f"adam_step: moment buffer for {name} has shape {state.m[name].shape}")

    hyper = state.hyper
    state.t += 1
    correction1 = 1.0 - hyper.beta1**state.t
    correction2 = 1.0 - hyper.beta2**state.t
    for name, value in params.items():
        grad = grads[name]
        state.m[name] = hyper.beta1 * state.m[name] + (1.0 - hyper.beta1) * grad
        state.v[name] = hyper.beta2 * state.v[name] + (1.0 - hyper.beta2) * grad * grad
        m_hat = state.m[name] / correction1
        v_hat = state.v[name] / correction2
        value -= hyper.lr * m_hat / (np.sqrt(v_hat) + hyper.epsilon)
    return params
