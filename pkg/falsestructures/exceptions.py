"""Exceptions raised by the laboratory

None of these derive from ValueError, so they pass through pydantic validators unchanged.
"""

from falsestructures.models.constants import (
    ConfigValidationErrorCode,
    ConstructionErrorCode,
    DefaultError,
    DimensionErrorCode,
    DivergedErrorCode,
    DomainErrorCode,
    MalformedImageErrorCode,
    ParameterErrorCode,
    SerializationErrorCode,
    StateErrorCode,
)


class FalseStructuresError(Exception):
    """Base error, carries a numeric code"""

    code: int = DefaultError

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message

    def __str__(self) -> str:
        return f"[{self.code}] {self.message}"


class DimensionError(FalseStructuresError):
    """Input shape does not match what a layer expects"""

    code = DimensionErrorCode


class StateError(FalseStructuresError):
    """Operation called in the wrong order (e.g. backward before forward)"""

    code = StateErrorCode


class DomainError(FalseStructuresError):
    """Argument outside of the mathematical domain of a function"""

    code = DomainErrorCode


class ParameterError(FalseStructuresError):
    """Invalid parameter combination"""

    code = ParameterErrorCode


class ConstructionError(FalseStructuresError):
    """An object could not be built because its invariants do not hold"""

    code = ConstructionErrorCode


class DivergedError(FalseStructuresError):
    """Training produced a non finite loss"""

    code = DivergedErrorCode

    def __init__(self, epoch: int, loss: float) -> None:
        super().__init__(f"Training diverged at epoch {epoch} (loss={loss})")
        self.epoch = epoch
        self.loss = loss


class MalformedImageError(FalseStructuresError):
    """Image does not contain exactly one 3-wide full-length stripe"""

    code = MalformedImageErrorCode


class SerializationError(FalseStructuresError):
    """Network file could not be read or written"""

    code = SerializationErrorCode


class ConfigValidationError(FalseStructuresError):
    """Configuration violates one or more preconditions"""

    code = ConfigValidationErrorCode

    def __init__(self, violations: list) -> None:
        lines = "; ".join(str(v) for v in violations)
        super().__init__(f"{len(violations)} configuration violation(s): {lines}")
        self.violations = violations
