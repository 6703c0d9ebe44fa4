"""
Custom exceptions for the laboratory.

Provides domain-specific exceptions with consistent error codes,
process exit codes, and error messages.
"""

from typing import Any


class ErrorCode:
    """
    Error codes for all laboratory exceptions.

    Reports and the command line surface these codes verbatim so that
    scripted acceptance runs can branch on them.
    """

    # Generic errors
    INTERNAL_ERROR = "INTERNAL_ERROR"
    VALIDATION_ERROR = "VALIDATION_ERROR"

    # Precondition errors
    DIMENSION_MISMATCH = "DIMENSION_MISMATCH"
    DEGREE_OVERFLOW = "DEGREE_OVERFLOW"
    INVALID_PARTITION = "INVALID_PARTITION"
    INVALID_SYMBOL = "INVALID_SYMBOL"
    NOT_ORTHOGONAL = "NOT_ORTHOGONAL"
    UNBALANCED_BLOCKS = "UNBALANCED_BLOCKS"
    INVALID_GROUP_ELEMENT = "INVALID_GROUP_ELEMENT"
    INVALID_CONFIG = "INVALID_CONFIG"

    # Numerical errors
    DIVERGENT_INTEGRAL = "DIVERGENT_INTEGRAL"
    QUADRATURE_NOT_CONVERGED = "QUADRATURE_NOT_CONVERGED"
    UNDEFINED_COORDINATES = "UNDEFINED_COORDINATES"
    INDETERMINACY = "INDETERMINACY"
    SAMPLING_FAILED = "SAMPLING_FAILED"

    # Check outcomes
    CHECK_FAILED = "CHECK_FAILED"


class LabException(Exception):
    """
    Base exception for all laboratory exceptions.

    Attributes:
        message: Human-readable error message
        error_code: Machine-readable error code
        exit_code: Process exit status used by the command line
        details: Additional error context
    """

    def __init__(
        self,
        message: str,
        error_code: str = ErrorCode.INTERNAL_ERROR,
        exit_code: int = 3,
        details: dict[str, Any] | None = None,
    ) -> None:
        """
        Initialize laboratory exception.

        Args:
            message: Human-readable error message
            error_code: Machine-readable error code
            exit_code: Process exit status
            details: Additional error context
        """
        self.message = message
        self.error_code = error_code
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self) -> str:
        """Return string representation."""
        return f"{self.error_code}: {self.message}"

    def __repr__(self) -> str:
        """Return detailed representation."""
        return (
            f"{self.__class__.__name__}("
            f"message={self.message!r}, "
            f"error_code={self.error_code!r}, "
            f"exit_code={self.exit_code}, "
            f"details={self.details!r})"
        )

    def to_dict(self) -> dict[str, Any]:
        """Serialize the error for the command line error channel."""
        return {
            "error": {
                "code": self.error_code,
                "message": self.message,
                "details": self.details,
            }
        }


class ValidationException(LabException):
    """
    Precondition or configuration failure (exit status 2).

    Raised when:
    - Multi-index lengths do not match the partition
    - A degree exceeds the Bergman weight m
    - A symbol literal or experiment config is malformed
    """

    def __init__(
        self,
        message: str = "Validation failed",
        error_code: str = ErrorCode.VALIDATION_ERROR,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(
            message=message,
            error_code=error_code,
            exit_code=2,
            details=details,
        )


class DivergentIntegralException(LabException):
    """
    Radial integral outside its convergence window (exit status 3).

    Raised when the Beta parameters satisfy sum(d) >= D, i.e. the symbol
    grows too fast for the weight (1 + r^2)^(-D).
    """

    def __init__(
        self,
        message: str = "Radial integral diverges",
        error_code: str = ErrorCode.DIVERGENT_INTEGRAL,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(
            message=message,
            error_code=error_code,
            exit_code=3,
            details=details,
        )


class QuadratureConvergenceException(LabException):
    """Numeric quadrature changed by more than its tolerance under node doubling."""

    def __init__(
        self,
        message: str = "Quadrature did not converge",
        error_code: str = ErrorCode.QUADRATURE_NOT_CONVERGED,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(
            message=message,
            error_code=error_code,
            exit_code=3,
            details=details,
        )


class UndefinedCoordinatesException(LabException):
    """
    Block coordinates are undefined (exit status 3).

    Raised when:
    - xi_(j) = z_(j) / r_j is needed but the block z_(j) vanishes
    - pi_k is evaluated outside V_k
    """

    def __init__(
        self,
        message: str = "Coordinates undefined at this point",
        error_code: str = ErrorCode.UNDEFINED_COORDINATES,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(
            message=message,
            error_code=error_code,
            exit_code=3,
            details=details,
        )


class SamplingException(LabException):
    """Monte-Carlo sampler could not produce admissible points."""

    def __init__(
        self,
        message: str = "Sampling failed",
        error_code: str = ErrorCode.SAMPLING_FAILED,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(
            message=message,
            error_code=error_code,
            exit_code=3,
            details=details,
        )


class CheckFailedException(LabException):
    """A selected check completed but did not meet its threshold (exit status 1)."""

    def __init__(
        self,
        message: str = "Check failed",
        error_code: str = ErrorCode.CHECK_FAILED,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(
            message=message,
            error_code=error_code,
            exit_code=1,
            details=details,
        )


# Convenience factory functions for common exceptions


def dimension_mismatch(
    expected: int, actual: int, what: str = "multi-index"
) -> ValidationException:
    """Create dimension mismatch exception."""
    return ValidationException(
        message=f"{what} has length {actual}, expected {expected}",
        error_code=ErrorCode.DIMENSION_MISMATCH,
        details={"expected": expected, "actual": actual, "what": what},
    )


def degree_overflow(degree: int, m: int) -> ValidationException:
    """Create degree overflow exception."""
    return ValidationException(
        message=f"degree {degree} exceeds the weight m={m}",
        error_code=ErrorCode.DEGREE_OVERFLOW,
        details={"degree": degree, "m": m},
    )


def divergent_integral(d: list[float], power: float) -> DivergentIntegralException:
    """Create divergent integral exception."""
    return DivergentIntegralException(
        message=f"sum(d)={sum(d)} must be smaller than D={power}",
        details={"d": list(d), "D": power},
    )


def undefined_block(block: int) -> UndefinedCoordinatesException:
    """Create undefined coordinates exception for a vanishing block."""
    return UndefinedCoordinatesException(
        message=f"block {block + 1} vanishes; xi_({block + 1}) is undefined",
        details={"block": block + 1},
    )
