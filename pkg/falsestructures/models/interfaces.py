"""Interfaces"""

from enum import Enum

from pydantic import BaseModel, Field


class ExperimentKind(str, Enum):
    """Experiment selected by the configuration"""

    EXP1 = "exp1"
    EXP2 = "exp2"
    CONSTRUCT_STABLE = "construct_stable"
    VERIFY = "verify"
    PROBE = "probe"


class VerificationStatus(str, Enum):
    """Result of a false structure check"""

    VERIFIED = "verified"
    REFUTED = "refuted"
    INCONCLUSIVE = "inconclusive"


class Verdict(str, Enum):
    """Structure a trained classifier implements"""

    ORIGINAL = "original"
    FALSE = "false"
    NEITHER = "neither"


class Perturber(str, Enum):
    """Hand designed input perturbations"""

    CASE1_ZERO_X2 = "case1-zero-x2"
    CASE1_ADD_DELTA = "case1-add-delta"
    CASE2_FAMILY_SWAP = "case2-family-swap"


class AttributionVerdict(BaseModel):
    """Agreement scores of a classifier with f and g on the paired diagnostic sets"""

    verdict: Verdict
    agreement_f_c0: float = Field(ge=0, le=1)
    agreement_f_cdelta: float = Field(ge=0, le=1)
    agreement_g: float = Field(ge=0, le=1)
    threshold: float
    points: int


class SeverityEstimate(BaseModel):
    """Monte-Carlo estimate of P(f != g) with a 95% normal half width"""

    estimate: float = Field(ge=0, le=1)
    half_width: float = Field(ge=0)
    n: int
    disagreements: int


class ProbeResult(BaseModel):
    """Label flips under a perturbation"""

    perturber: Perturber
    flip_rate: float = Field(ge=0, le=1)
    max_perturbation: float
    n: int
