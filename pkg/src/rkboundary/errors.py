"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`RKBoundaryError`, so callers can separate library failures from
ordinary Python bugs.
"""


class RKBoundaryError(Exception):
    """Base class for all library errors."""


class DomainError(RKBoundaryError, ValueError):
    """A point does not belong to the domain it is used on."""


class BranchError(RKBoundaryError, ArithmeticError):
    """A principal-branch power was requested too close to the cut."""


class DivisionError(RKBoundaryError, ZeroDivisionError):
    """A denominator kernel or function vanished numerically."""


class KernelOverflowError(RKBoundaryError, OverflowError):
    """``exp`` of a kernel value would overflow."""


class DegenerateError(RKBoundaryError, ArithmeticError):
    """A diagonal value (or a derived radicand) is degenerate."""


class HermitianError(RKBoundaryError, ArithmeticError):
    """A diagonal kernel value has a non-negligible imaginary part."""


class IllConditioned(RKBoundaryError, ArithmeticError):
    """More than half of a Gram spectrum fell below the pseudoinverse cutoff."""


class ConvergenceError(RKBoundaryError, ArithmeticError):
    """A series or iteration failed to reach its tolerance."""


class PoleError(RKBoundaryError, ArithmeticError):
    """Evaluation requested too close to a pole."""


class NotApproaching(RKBoundaryError):
    """A generated sequence does not approach the requested boundary point."""


class Inconclusive(RKBoundaryError):
    """A sampled classification produced no clear pattern."""


class NoMatch(RKBoundaryError):
    """No anchored boundary point fits the observed limit."""


class StalledError(RKBoundaryError):
    """An iteration stopped making progress toward the boundary."""


class StencilError(RKBoundaryError, ValueError):
    """A finite-difference stencil leaves the domain."""


class FactorRefuted(RKBoundaryError):
    """A pipeline was gated on a composition factor that sampling refuted."""

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict
