"""Decide which structure a classifier implements from its behaviour on C_0 and C_delta

A classifier that learned g answers 0 on all of C_0 and follows f on C_delta. One that
learned f follows f on both sets.
"""

import numpy as np

from falsestructures.diagnostics.oracles import Classifier, StructureOracle
from falsestructures.exceptions import ParameterError
from falsestructures.models.constants import ATTRIBUTION_THRESHOLD
from falsestructures.models.interfaces import AttributionVerdict, Verdict
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)


def _check_pairs(c0: np.ndarray, cdelta: np.ndarray, mask: np.ndarray | None) -> np.ndarray:
    if c0.shape != cdelta.shape or c0.ndim != 2:
        raise ParameterError(f"C0 {c0.shape} and Cdelta {cdelta.shape} are not paired point lists")
    if not np.array_equal(c0[:, 0], cdelta[:, 0]):
        raise ParameterError("C0 and Cdelta are not paired by x1")
    mask = np.ones(len(c0), dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
    if mask.shape != (len(c0),):
        raise ParameterError(f"mask of shape {mask.shape} for {len(c0)} points")
    if not mask.any():
        raise ParameterError("no diagnostic point left after masking")
    return mask


def classify_learned_structure(
    classifier: Classifier,
    c0: np.ndarray,
    cdelta: np.ndarray,
    f: StructureOracle,
    g: StructureOracle,
    threshold: float = ATTRIBUTION_THRESHOLD,
    mask: np.ndarray | None = None,
) -> AttributionVerdict:
    """Agreement of the classifier with f and g on the paired sets, restricted to mask

    Args:
        classifier (Classifier): trained network or oracle
        c0 (np.ndarray): points (x1, 0)
        cdelta (np.ndarray): points (x1, delta f(x1)) paired row by row with c0
        f (StructureOracle): original structure
        g (StructureOracle): false structure
        threshold (float): agreement needed for a verdict, in (0.5, 1]
        mask (np.ndarray | None): rows to score, usually the stable region
    """
    if not 0.5 < threshold <= 1.0:
        raise ParameterError(f"threshold must lie in (0.5, 1], got {threshold}")
    c0 = np.asarray(c0, dtype=np.float64)
    cdelta = np.asarray(cdelta, dtype=np.float64)
    mask = _check_pairs(c0, cdelta, mask)
    c0, cdelta = c0[mask], cdelta[mask]

    pred_c0 = classifier.predict_labels(c0)
    pred_cdelta = classifier.predict_labels(cdelta)
    agreement_f_c0 = float((pred_c0 == f.label_many(c0)).mean())
    agreement_f_cdelta = float((pred_cdelta == f.label_many(cdelta)).mean())
    agreement_g = float(
        np.concatenate([pred_c0 == g.label_many(c0), pred_cdelta == g.label_many(cdelta)]).mean()
    )

    if agreement_g >= threshold:
        verdict = Verdict.FALSE
    elif agreement_f_c0 >= threshold and agreement_f_cdelta >= threshold:
        verdict = Verdict.ORIGINAL
    else:
        verdict = Verdict.NEITHER
    logger.debug(
        "Attribution %s: f on C0 %.3f, f on Cdelta %.3f, g %.3f",
        verdict.value,
        agreement_f_c0,
        agreement_f_cdelta,
        agreement_g,
    )
    return AttributionVerdict(
        verdict=verdict,
        agreement_f_c0=agreement_f_c0,
        agreement_f_cdelta=agreement_f_cdelta,
        agreement_g=agreement_g,
        threshold=threshold,
        points=int(mask.sum()),
    )
