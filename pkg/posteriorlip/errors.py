"""
⚠️ Custom Error Hierarchy.
==============================

Structured exception types raised by the posteriorlip numerics, bounds and
experiment runners.

✨ Purpose
--------------
- 🛡️ One root: every library failure is a `PosteriorLipError`.
- 🔍 Context: errors carry the quantities that triggered them (n, key, line).

📦 Classes
--------------
- `PosteriorLipError`: Base exception for all library errors.
- `NumericalError`: Quadrature, differentiation or eigen-solver failures.
- `NonConvergent`, `NonFinite`, `Degenerate`, `NumericalFailure`,
  `NonIntegrable`: concrete numerical failures.
- `InvalidInput`: Preconditions on arguments not met.
- `Infeasible`, `ThresholdViolation`, `MissingParam`, `InvalidCurvature`,
  `CurvatureNonPositive`: concrete precondition failures.
- `SupportError`: Posterior construction hit a vanishing density.
- `ZeroEvidence`, `ZeroDensity`: concrete support failures.
- `ConfigError`: Run configuration could not be decoded or validated.
"""


class PosteriorLipError(Exception):
    """
    Base exception for all posteriorlip errors.

    Attributes
    ----------
    message : str
        Human-readable error message.
    """

    __slots__: tuple[str, ...] = ("message",)

    def __init__(self, message: str) -> None:
        """
        Initialize the base error.

        Parameters
        ----------
        message : str
            Human-readable error message.
        """
        super().__init__(message)
        self.message: str = message


class NumericalError(PosteriorLipError):
    """Base class for failures of a numerical routine."""

    __slots__: tuple[str, ...] = ()


class NonConvergent(NumericalError):
    """
    Raised when an iterative or adaptive routine exhausts its budget.

    Attributes
    ----------
    iterations : int | None
        Subdivisions, refinement rounds or solver iterations spent.
    """

    __slots__: tuple[str, ...] = ("iterations",)

    def __init__(self, message: str, iterations: int | None = None) -> None:
        super().__init__(message)
        self.iterations: int | None = iterations


class NonFinite(NumericalError):
    """
    Raised when an integrand or objective evaluates to NaN or an infinity.

    Attributes
    ----------
    at : float | None
        Abscissa where the non-finite value was observed.
    """

    __slots__: tuple[str, ...] = ("at",)

    def __init__(self, message: str, at: float | None = None) -> None:
        super().__init__(message)
        self.at: float | None = at


class Degenerate(NumericalError):
    """Raised when a weight underflows on too much of a grid."""

    __slots__: tuple[str, ...] = ()


class NumericalFailure(NumericalError):
    """Raised when a linear-algebra kernel fails (e.g. eigendecomposition)."""

    __slots__: tuple[str, ...] = ()


class NonIntegrable(NumericalError):
    """Raised when a reciprocal weight such as 1/Q is not integrable."""

    __slots__: tuple[str, ...] = ()


class InvalidInput(PosteriorLipError, ValueError):
    """
    Base class for violated preconditions on arguments.

    Also a `ValueError`, so that validation inside `msgspec.Struct.__post_init__`
    surfaces as a `msgspec.ValidationError` during decoding.
    """

    __slots__: tuple[str, ...] = ()


class Infeasible(InvalidInput):
    """Raised when transport marginals do not both carry unit mass."""

    __slots__: tuple[str, ...] = ()


class ThresholdViolation(InvalidInput):
    """
    Raised when a sample size lies below a bound's validity threshold.

    Attributes
    ----------
    n : int
        The sample size supplied.
    threshold : float
        The size the bound requires `n` to exceed.
    """

    __slots__: tuple[str, ...] = ("n", "threshold")

    def __init__(self, n: int, threshold: float) -> None:
        super().__init__(f"n={n} does not exceed the validity threshold {threshold:.6g}")
        self.n: int = n
        self.threshold: float = threshold


class MissingParam(InvalidInput):
    """
    Raised when a required parameter is neither supplied nor computable.

    Attributes
    ----------
    name : str
        Name of the missing parameter.
    """

    __slots__: tuple[str, ...] = ("name",)

    def __init__(self, name: str, detail: str = "") -> None:
        message = f"missing required parameter {name!r}"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)
        self.name: str = name


class InvalidCurvature(InvalidInput):
    """
    Raised when a curvature lower bound is not strictly positive.

    Attributes
    ----------
    alpha : float
        The offending curvature.
    """

    __slots__: tuple[str, ...] = ("alpha",)

    def __init__(self, alpha: float, message: str | None = None) -> None:
        super().__init__(message or f"curvature must be positive, got alpha={alpha:.6g}")
        self.alpha: float = alpha


class CurvatureNonPositive(InvalidCurvature):
    """Raised when Hess[M] + λ*(Hess W) admits no positive lower bound."""

    __slots__: tuple[str, ...] = ()


class SupportError(PosteriorLipError):
    """Base class for failures caused by vanishing densities."""

    __slots__: tuple[str, ...] = ()


class ZeroEvidence(SupportError):
    """
    Raised when the marginal density of the data is numerically zero.

    Attributes
    ----------
    log_evidence : float
        Natural logarithm of the evidence that was computed.
    """

    __slots__: tuple[str, ...] = ("log_evidence",)

    def __init__(self, message: str, log_evidence: float = float("-inf")) -> None:
        super().__init__(message)
        self.log_evidence: float = log_evidence


class ZeroDensity(SupportError):
    """Raised when g(x, ·) vanishes on a set of positive prior mass."""

    __slots__: tuple[str, ...] = ()


class ConfigError(PosteriorLipError):
    """
    Raised when a run configuration is malformed.

    Attributes
    ----------
    key : str | None
        Dotted path of the offending key, when known.
    line : int | None
        Line number in the configuration file, when known.
    """

    __slots__: tuple[str, ...] = ("key", "line")

    def __init__(
        self, message: str, key: str | None = None, line: int | None = None
    ) -> None:
        details = [
            part
            for part in (
                f"key {key}" if key else "",
                f"line {line}" if line is not None else "",
            )
            if part
        ]
        full = f"{message} ({', '.join(details)})" if details else message
        super().__init__(full)
        self.key: str | None = key
        self.line: int | None = line
