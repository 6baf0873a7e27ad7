from __future__ import annotations

from dataclasses import dataclass

from .util._pretty_print import pretty_print_run_error_details


@dataclass
class RunErrorDetails:
    """Data collected from a simulation run when an exception occurs."""

    scenario: str
    replica: int
    tau: float
    steps: int
    collisions: int

    def __str__(self) -> str:
        return pretty_print_run_error_details(self)


class HomokineticsException(Exception):
    """Base class for all exceptions raised by homokinetics."""

    run_data: RunErrorDetails | None

    def __init__(self, *args: object) -> None:
        super().__init__(*args)
        self.run_data = None


class NumericalFailure(HomokineticsException):
    """Base class for failures of a numerical method on otherwise valid input."""

    message: str

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class DegenerateFlow(HomokineticsException):
    """Raised when the deformation matrix vanishes identically."""

    message: str

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class FiniteHorizon(HomokineticsException):
    """Raised when det(I+tA) reaches zero in finite time and the operation needs t past it."""

    message: str
    horizon: float

    def __init__(self, message: str, horizon: float):
        self.message = message
        self.horizon = horizon
        super().__init__(message)


class UnclassifiableFlow(HomokineticsException):
    """Raised when a matrix has no canonical long-time form among the supported cases."""

    message: str

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class DomainError(HomokineticsException):
    """Raised when an argument lies outside the domain of a function."""

    message: str

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class ConfigError(HomokineticsException):
    """Raised for invalid simulation settings or scenario files.

    `field` is the dotted path of the offending entry and `line` its line in the source file, when known.
    """

    message: str
    field: str | None
    line: int | None

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.message = message
        self.field = field
        self.line = line
        location = ""
        if field is not None:
            location += f" (field {field}"
            location += f", line {line})" if line is not None else ")"
        super().__init__(message + location)


class MajorantViolation(NumericalFailure):
    """Raised when a candidate collision rate exceeds the rejection majorant."""

    rate: float
    majorant: float

    def __init__(self, message: str, rate: float, majorant: float):
        self.rate = rate
        self.majorant = majorant
        super().__init__(message)


class QuadratureBudgetExceeded(NumericalFailure):
    """Raised when the operator assembly cannot reach its error target within the node budget."""


class StiffnessFailure(NumericalFailure):
    """Raised when the adaptive ODE integrator collapses its step size."""


class CompatibilityError(HomokineticsException):
    """Raised when a right-hand side violates the solvability condition of the linearized operator."""

    message: str

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class MissingB(HomokineticsException):
    """Raised when a prefactor needs the Green-Kubo constant and none was supplied."""

    message: str

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class InsufficientData(HomokineticsException):
    """Raised when a fit window holds too few points."""

    message: str

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class NonPositiveValues(HomokineticsException):
    """Raised when a log-log fit meets a zero or negative value."""

    message: str

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class RegimeMismatch(HomokineticsException):
    """Raised when a measurement is compared against a prediction that has no power law."""

    message: str

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)
