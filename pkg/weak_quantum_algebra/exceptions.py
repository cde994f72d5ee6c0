"""
Error hierarchy for the weak quantum algebra engine.

Every engine error derives from ``WeakQuantumError`` and, where a builtin
exception describes the same failure, from that builtin as well so callers can
catch either.
"""

from typing import Any, List, Optional


class WeakQuantumError(Exception):
    """Base class for all engine errors."""


class DatumValidationError(WeakQuantumError, ValueError):
    """A Borcherds-Cartan datum failed one or more structural conditions.

    Attributes:
        violations: Every violated condition, as ``Violation`` models.
    """

    def __init__(self, violations: List[Any]):
        self.violations = list(violations)
        kinds = ", ".join(v.render() for v in self.violations)
        super().__init__(f"invalid Borcherds-Cartan datum: {kinds}")


class IndexOutOfRange(WeakQuantumError, IndexError):
    """An index does not belong to the index set I."""


class DivisionByZero(WeakQuantumError, ZeroDivisionError):
    """Division by the zero scalar."""


class OutOfRange(WeakQuantumError, ValueError):
    """An argument lies outside the range an operation accepts."""


class UnsupportedM(WeakQuantumError, ValueError):
    """The idempotency order m is outside the supported range."""


class NotApplicable(WeakQuantumError, ValueError):
    """An operation was requested on data it is not defined for."""


class ReductionBudgetExceeded(WeakQuantumError, RuntimeError):
    """Reduction hit the step ceiling or the word-length ceiling."""


class InvalidExponent(WeakQuantumError, ValueError):
    """A J-exponent does not define the requested subalgebra."""


class SectorMismatch(WeakQuantumError, ValueError):
    """Highest-weight eigenvalues are inconsistent with the requested sector."""


class GammaNotRoot(WeakQuantumError, ValueError):
    """The J-eigenvalue is not a rational (m-1)-th root of unity."""


class GatingViolation(WeakQuantumError, ValueError):
    """The hypothesis for one-dimensional w-bar modules does not hold."""


class TruncationTooTight(WeakQuantumError, RuntimeError):
    """The Weyl length bound changes coefficients below the height bound."""


class ExpressionSyntaxError(WeakQuantumError, SyntaxError):
    """An algebra expression could not be parsed.

    Attributes:
        position: Zero-based character offset of the failure.
    """

    def __init__(self, message: str, position: int = 0):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class UnknownGenerator(WeakQuantumError, ValueError):
    """An expression names a generator the presentation does not have."""


class ConfigError(WeakQuantumError, ValueError):
    """A configuration file could not be loaded.

    Attributes:
        kind: One of ``io``, ``parse`` or ``validation``.
    """

    def __init__(self, kind: str, message: str, detail: Optional[Any] = None):
        self.kind = kind
        self.detail = detail
        super().__init__(f"{kind} error: {message}")


class SuiteError(WeakQuantumError, RuntimeError):
    """A verification suite aborted.

    Attributes:
        suite: Name of the suite that was running.
    """

    def __init__(self, suite: str, cause: Exception):
        self.suite = suite
        super().__init__(f"suite {suite!r}: {type(cause).__name__}: {cause}")
