"""Exception types shared across the package.

The CLI maps these onto exit codes: domain/usage problems exit 2, numerical
failures (non-convergence, bracket loss, tolerance not met) exit 1.
"""


class HkError(Exception):
    """Base class for all package-specific errors."""


class DomainError(HkError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class PoleError(DomainError):
    """A Gamma factor in a closed-form coefficient sits on a pole."""


class AxisProximityError(DomainError):
    """Profile evaluation requested too close to the half-space axis (z -> 1)."""


class ConvergenceError(HkError, RuntimeError):
    """A series did not converge within the term cap.

    Carries the partial sum and the number of terms accumulated so far.
    """

    def __init__(self, message, partial_sum=None, terms=None):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.terms = terms


class QuadratureToleranceError(HkError, RuntimeError):
    """Refinement budget exhausted before the requested tolerance was met."""

    def __init__(self, message, achieved=None, value=None):
        super().__init__(message)
        self.achieved = achieved
        self.value = value


class BracketError(HkError, RuntimeError):
    """Shooting bisection could not bracket a sign change.

    ``endpoints`` maps each trial slope to the observed divergence sign.
    """

    def __init__(self, message, endpoints=None):
        super().__init__(message)
        self.endpoints = endpoints or {}


class DegenerateInputError(HkError, ValueError):
    """Input makes the operation vacuous (e.g. a test function with zero trace)."""


class TestFunctionError(HkError, ValueError):
    """A test function failed construction-time validation."""

    __test__ = False  # not a pytest collection target
