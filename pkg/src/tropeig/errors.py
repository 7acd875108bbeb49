"""Exception types shared across the package."""


class TropeigError(Exception):
    """Base class for all package errors."""


class InvalidPolynomialError(TropeigError, ValueError):
    """Raised for a polynomial with no usable coefficient (all zero, or degree 0)."""


class ScalingOverflowError(TropeigError, OverflowError):
    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"scaling overflowed at coefficient index {index}")


class DegenerateBlockError(TropeigError, ValueError):
    """Raised when the requested eigenvector block is identically zero."""


class InvalidEigenvectorError(TropeigError, ValueError):
    pass


class SolverFailure(TropeigError, RuntimeError):
    """The generalized eigensolver did not converge.

    ``converged`` is the number of eigenvalues known to be correct (0 when
    the kernel gives no such information). ``partial`` optionally carries
    whatever results the caller managed to assemble before the failure.
    """

    def __init__(self, message, converged=0, partial=None):
        super().__init__(message)
        self.converged = converged
        self.partial = partial


class NotApplicableError(TropeigError, ValueError):
    """A theorem hypothesis does not hold for the given input."""

    def __init__(self, hypothesis, message=None):
        self.hypothesis = hypothesis
        super().__init__(message or f"hypothesis violated: {hypothesis}")
