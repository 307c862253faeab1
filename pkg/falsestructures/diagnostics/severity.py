"""Monte-Carlo measure of the disagreement set {x : f(x) != g(x)}"""

import math

import numpy as np

from falsestructures.diagnostics.oracles import DomainSampler, StructureOracle
from falsestructures.exceptions import ParameterError
from falsestructures.models.interfaces import SeverityEstimate
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)

MIN_SAMPLES = 100
Z_95 = 1.96


def estimate_severity(
    f: StructureOracle,
    g: StructureOracle,
    sampler: DomainSampler,
    n: int,
    rng: np.random.Generator,
) -> SeverityEstimate:
    """Fraction of n sampled points where f and g disagree, with a normal 95% half width

    Args:
        f (StructureOracle): original structure
        g (StructureOracle): false structure
        sampler (DomainSampler): law on the domain
        n (int): sample count, at least 100
        rng (np.random.Generator): sampling stream
    """
    if n < MIN_SAMPLES:
        raise ParameterError(f"severity estimation needs n >= {MIN_SAMPLES}, got {n}")
    points = sampler(rng, n)
    disagreements = int((f.label_many(points) != g.label_many(points)).sum())
    p_hat = disagreements / n
    half_width = Z_95 * math.sqrt(p_hat * (1.0 - p_hat) / n)
    logger.debug("Severity of %s vs %s: %.4f +- %.4f (n=%d)", g.name, f.name, p_hat, half_width, n)
    return SeverityEstimate(estimate=p_hat, half_width=half_width, n=n, disagreements=disagreements)
