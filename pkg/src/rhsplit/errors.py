"""Exception hierarchy.

Two families: ``ValidationError`` for inputs that violate a contract
(CLI exit code 1) and ``NumericalError`` for computations that could not
reach their tolerance (CLI exit code 2).
"""


class RHSplitError(Exception):
    pass


class ValidationError(RHSplitError, ValueError):
    pass


class NumericalError(RHSplitError, ArithmeticError):
    pass


class DegenerateSymbolError(ValidationError):
    """A loop sample is singular (|det| below the floor)."""


class UnderResolvedError(NumericalError):
    """Grid or truncation too coarse for the requested accuracy."""


class RankAmbiguityError(NumericalError):
    """Singular values sit too close to the rank cutoff to decide."""


class InconsistentProfileError(NumericalError):
    """Kernel-dimension profile does not come from any splitting type."""


class FactorizationError(NumericalError):
    pass


class BranchAmbiguityError(NumericalError):
    """Eigenvalues too close to the logarithm branch cut."""


class OnBranchCutError(ValidationError):
    pass


class ResonanceError(ValidationError):
    """Two exponents at one point differ by a nonzero integer."""


class LimitMismatchError(NumericalError):
    pass


class IntegrationError(NumericalError):
    pass
