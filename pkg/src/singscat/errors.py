"""Exception hierarchy shared by all singscat modules."""


class SingscatError(Exception):
    """Base class for all package errors."""


class DomainError(SingscatError, ValueError):
    """Input outside the mathematical domain of an operation.

    Raised for things like a scattering length requested at s <= 3, a
    subcritical inverse-square coupling, or a malformed potential file.
    Maps to CLI exit code 2.
    """


class ConvergenceError(SingscatError, RuntimeError):
    """A numerical procedure failed to converge within its budget.

    Carries an optional diagnostic trace of the last few integrator or
    root-finder states. Maps to CLI exit code 3.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace) if trace else []


class AmbiguityError(ConvergenceError):
    """A root search converged, but outside its trust region."""


class ConsistencyError(SingscatError, RuntimeError):
    """An internal cross-check between two independent routes failed."""
