"""Three valued false structure check

(g, L') is a false structure for (f, L) relative to T when g agrees with f on every point of
T and disagrees with it on at least one point outside T. Agreement on T is decided exactly,
disagreement outside T is searched for within a sampling budget.
"""

from dataclasses import dataclass

import numpy as np

from falsestructures.diagnostics.oracles import DomainSampler, StructureOracle
from falsestructures.exceptions import ParameterError
from falsestructures.models.interfaces import VerificationStatus
from falsestructures.utils.logging import get_logger
from falsestructures.utils.outcome_utils import aggregate_status

logger = get_logger(__name__)

SEARCH_CHUNK = 1000


@dataclass(frozen=True)
class VerificationOutcome:
    """Status with the point that decided it

    point is a witness outside T (verified) or a point of T where f and g differ (refuted).
    """

    status: VerificationStatus
    f_name: str
    g_name: str
    point: np.ndarray | None = None
    f_label: int | None = None
    g_label: int | None = None
    samples_drawn: int = 0
    predicates: tuple[tuple[str, ...], tuple[str, ...]] = ((), ())

    def to_record(self) -> dict:
        """Flat dict for reports"""
        return {
            "f": self.f_name,
            "g": self.g_name,
            "status": self.status.value,
            "f_label": self.f_label,
            "g_label": self.g_label,
            "samples_drawn": self.samples_drawn,
        }


def _row_keys(points: np.ndarray) -> set[bytes]:
    flat = np.ascontiguousarray(points, dtype=np.float64).reshape(len(points), -1)
    return {row.tobytes() for row in flat}


def verify_false_structure(
    f: StructureOracle,
    g: StructureOracle,
    T: np.ndarray,
    witness_sampler: DomainSampler,
    budget: int,
    rng: np.random.Generator,
) -> VerificationOutcome:
    """Check g against f on T, then search budget samples outside T for a disagreement

    Args:
        f (StructureOracle): original structure
        g (StructureOracle): candidate false structure
        T (np.ndarray): training points, one per row
        witness_sampler (DomainSampler): (rng, n) -> n candidate points
        budget (int): maximal number of candidates drawn
        rng (np.random.Generator): sampling stream
    """
    T = np.asarray(T, dtype=np.float64)
    if len(T) == 0:
        raise ParameterError("T must contain at least one point")
    if budget < 1:
        raise ParameterError(f"witness budget must be >= 1, got {budget}")
    common = {
        "f_name": f.name,
        "g_name": g.name,
        "predicates": (f.predicate_descriptions, g.predicate_descriptions),
    }

    f_on_t = f.label_many(T)
    g_on_t = g.label_many(T)
    if mismatch := np.flatnonzero(f_on_t != g_on_t).tolist():
        index = mismatch[0]
        logger.info("%s vs %s refuted: %d of %d training points disagree", g.name, f.name, len(mismatch), len(T))
        return VerificationOutcome(
            status=VerificationStatus.REFUTED,
            point=T[index].copy(),
            f_label=int(f_on_t[index]),
            g_label=int(g_on_t[index]),
            **common,
        )

    training_keys = _row_keys(T)
    drawn = 0
    while drawn < budget:
        candidates = np.asarray(witness_sampler(rng, min(SEARCH_CHUNK, budget - drawn)), dtype=np.float64)
        if len(candidates) == 0:
            break
        drawn += len(candidates)
        f_labels = f.label_many(candidates)
        g_labels = g.label_many(candidates)
        for index in np.flatnonzero(f_labels != g_labels):
            if candidates[index].tobytes() in training_keys:
                continue
            logger.info("%s is a false structure for %s, witness found after %d samples", g.name, f.name, drawn)
            return VerificationOutcome(
                status=VerificationStatus.VERIFIED,
                point=candidates[index].copy(),
                f_label=int(f_labels[index]),
                g_label=int(g_labels[index]),
                samples_drawn=drawn,
                **common,
            )

    logger.warning("%s agrees with %s on T but no witness found in %d samples", g.name, f.name, budget)
    return VerificationOutcome(status=VerificationStatus.INCONCLUSIVE, samples_drawn=drawn, **common)


def aggregate_outcomes(outcomes: list[VerificationOutcome]) -> VerificationStatus:
    """Combined status of several checks (refuted > inconclusive > verified)"""
    return aggregate_status([outcome.status for outcome in outcomes])
