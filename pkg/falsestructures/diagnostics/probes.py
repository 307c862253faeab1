"""Label flips under hand designed perturbations"""

import numpy as np

from falsestructures.case2.generators import StripeSet
from falsestructures.diagnostics.oracles import Classifier
from falsestructures.exceptions import ParameterError
from falsestructures.models.constants import CASE1_DELTA
from falsestructures.models.interfaces import Perturber, ProbeResult
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)

CASE1_PERTURBERS = (Perturber.CASE1_ZERO_X2, Perturber.CASE1_ADD_DELTA)


def perturb(dataset: np.ndarray | StripeSet, perturber: Perturber, delta: float = CASE1_DELTA) -> np.ndarray:
    """Perturbed copy of the dataset inputs

    Args:
        dataset (np.ndarray | StripeSet): points (n, 2) for the case1 perturbers, stripes for family swap
        perturber (Perturber): perturbation to apply
        delta (float): value written to x2 by case1-add-delta
    """
    if perturber in CASE1_PERTURBERS:
        if isinstance(dataset, StripeSet):
            raise ParameterError(f"{perturber.value} applies to (x1, x2) points, not stripe images")
        points = np.array(dataset, dtype=np.float64)
        if points.ndim != 2 or points.shape[1] != 2:
            raise ParameterError(f"{perturber.value} needs points of shape (n, 2), got {points.shape}")
        points[:, 1] = 0.0 if perturber is Perturber.CASE1_ZERO_X2 else delta
        return points
    if not isinstance(dataset, StripeSet):
        raise ParameterError(f"{perturber.value} applies to stripe image sets only")
    return dataset.swapped().images


def _inputs(dataset: np.ndarray | StripeSet) -> np.ndarray:
    if isinstance(dataset, StripeSet):
        return dataset.images
    return np.asarray(dataset, dtype=np.float64)


def adversarial_probe(
    classifier: Classifier,
    dataset: np.ndarray | StripeSet,
    perturber: Perturber,
    delta: float = CASE1_DELTA,
) -> ProbeResult:
    """Fraction of points whose predicted label changes, with the largest inf-norm perturbation"""
    perturber = Perturber(perturber)
    perturbed = perturb(dataset, perturber, delta)
    original = _inputs(dataset)
    if len(original) == 0:
        raise ParameterError("cannot probe an empty dataset")
    before = classifier.predict_labels(original)
    after = classifier.predict_labels(perturbed)
    flip_rate = float((before != after).mean())
    size = float(np.abs(perturbed - original).reshape(len(original), -1).max())
    logger.info("Probe %s: flip rate %.4f, max perturbation %.3g", perturber.value, flip_rate, size)
    return ProbeResult(perturber=perturber, flip_rate=flip_rate, max_perturbation=size, n=len(original))
