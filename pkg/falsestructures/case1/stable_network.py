"""Analytic two layer network that learns f_a on the stable region with a bounded loss

Each interval (c - eps, d + eps) of S_eps gets a bump of four ReLU units

    phi(x) = relu((x1 - c)/eps + 1) - relu((x1 - c)/eps) - relu((x1 - d)/eps) + relu((x1 - d)/eps - 1)

which is 1 on [c, d] and 0 outside [c - eps, d + eps]. With Phi the sum of the bumps of
odd-label intervals, Psi = 2 N Phi - N is +N wherever f_a = 1 and -N wherever f_a = 0.
"""

import math

import numpy as np
from pydantic import BaseModel

from falsestructures.case1.generators import sample_stable_region
from falsestructures.case1.problem import Case1Problem, f_a_many, interval_label, stable_region
from falsestructures.exceptions import ConstructionError
from falsestructures.nn.layers import Dense, ReLU
from falsestructures.nn.losses import bce_loss
from falsestructures.nn.network import Network
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)

LOGIT_SLACK = 1e-9
BUMP_PATTERN = np.array([1.0, -1.0, -1.0, 1.0])


def logit_scale(eta: float, r: int, slack: float = LOGIT_SLACK) -> float:
    """Smallest N (plus one ulp) with -log sigma(N) below the per-sample budget eta / r

    Args:
        eta (float): loss bound for r samples
        r (int): number of samples sharing the bound
        slack (float): relative shrink of the budget absorbing rounding in Phi
    """
    if eta <= 0:
        raise ConstructionError(f"eta must be positive, got {eta}")
    if r < 1:
        raise ConstructionError(f"r must be >= 1, got {r}")
    budget = eta / r * (1.0 - slack)
    # log(q / (1 - q)) with q = exp(-budget)
    n = -budget - math.log(-math.expm1(-budget))
    return math.nextafter(n, math.inf)


def bump_units(p: Case1Problem, k: int) -> tuple[np.ndarray, np.ndarray]:
    """First layer rows and biases of the bump on interval k (x2 weights are 0)"""
    inv = 1.0 / p.epsilon
    c = p.a / (k + 1) + p.epsilon
    d = p.a / k - p.epsilon
    weight = np.zeros((4, 2))
    weight[:, 0] = inv
    bias = np.array([-c * inv + 1.0, -c * inv, -d * inv, -d * inv - 1.0])
    return weight, bias


def build_stable_network(p: Case1Problem, eta: float, r: int, pad: bool = True) -> Network:
    """Dense(2, 4K) -> ReLU -> Dense(4K, 1) computing Psi = 2 N Phi - N

    Args:
        p (Case1Problem): problem
        eta (float): bound on the summed cross entropy over r samples of S_eps x [0, 1]
        r (int): sample count of the bound
        pad (bool): pad the first layer with zero units up to width 4K
    """
    n_scale = logit_scale(eta, r)
    region = stable_region(p)
    used = 4 * len(region)
    width = max(4 * p.K, used) if pad else used

    hidden = Dense(2, width)
    output = Dense(width, 1)
    for index, k in enumerate(region.ks):
        rows = slice(4 * index, 4 * index + 4)
        hidden.params["weight"][rows], hidden.params["bias"][rows] = bump_units(p, k)
        if interval_label(k) == 1:
            output.params["weight"][0, rows] = 2.0 * n_scale * BUMP_PATTERN
    output.params["bias"][0] = -n_scale

    net = Network([hidden, ReLU(), output], (2,))
    logger.info("Stable network built: N=%.6f, width=%d (%d bump units)", n_scale, width, used)
    return net


class StableCertificate(BaseModel):
    """Empirical check of the constructed network's guarantees"""

    eta: float
    r: int
    logit_scale: float
    samples: int
    errors: int
    subsets: int
    max_subset_loss: float
    min_abs_logit: float
    x2_weights_zero: bool

    @property
    def holds(self) -> bool:
        """No misclassified sample and every subset loss within eta"""
        return self.errors == 0 and self.max_subset_loss <= self.eta and self.x2_weights_zero


def certify_stable_network(
    p: Case1Problem,
    net: Network,
    eta: float,
    r: int,
    rng: np.random.Generator,
    samples: int = 100_000,
    subsets: int = 100,
) -> StableCertificate:
    """Classify uniform samples of S_eps x [0, 1] and bound the loss on random size-r subsets"""
    points = sample_stable_region(p, samples, rng)
    logits = net.predict_logits(points, chunk_size=10_000)
    labels = f_a_many(p, points[:, 0])
    predictions = net.predict_labels(points, chunk_size=10_000)
    errors = int((predictions != labels).sum())

    worst = 0.0
    for _ in range(subsets):
        index = rng.choice(samples, size=r, replace=False)
        worst = max(worst, bce_loss(logits[index], labels[index].astype(np.float64)))

    certificate = StableCertificate(
        eta=eta,
        r=r,
        logit_scale=logit_scale(eta, r),
        samples=samples,
        errors=errors,
        subsets=subsets,
        max_subset_loss=worst,
        min_abs_logit=float(np.abs(logits).min()),
        x2_weights_zero=bool((net.layers[0].params["weight"][:, 1] == 0).all()),
    )
    logger.info(
        "Certificate: %d/%d errors, max subset loss %.3g (eta=%g)", errors, samples, worst, eta
    )
    return certificate
