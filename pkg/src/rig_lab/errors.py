"""Exception types shared across the package."""


class RigLabError(Exception):
    """Base class for all library errors."""


class ModelConstraintError(RigLabError):
    """Raised when model parameters violate a hard constraint (e.g. q >= p)."""


class MonotonicityError(RigLabError):
    """Raised when a monotone adversary is asked to delete a ground-truth edge."""


class BudgetExceededError(RigLabError):
    """Raised when an adversary strategy cannot be applied within its budgets."""


class EnumerationCapError(RigLabError):
    """Raised when an exhaustive enumeration exceeds its configured cap."""


class SolverBudgetError(RigLabError):
    """Raised when a semidefinite solve would exceed the memory/size budget."""


class SolverConvergenceError(RigLabError):
    """Raised when the solver stops without a usable verdict.

    Distinct from an Infeasible outcome: no certificate is implied.
    """


class DegreeOverflowError(RigLabError):
    """Raised when a pseudo-expectation query exceeds the stored moment degree."""


class SerializationError(RigLabError):
    """Raised on malformed instance/report files; carries field diagnostics."""
