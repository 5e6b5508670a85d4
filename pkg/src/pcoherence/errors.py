"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands disagree on the number of variables."""


class DegreeError(ValueError):
    """A working degree is too low for the polynomials involved."""


class UnboundedProgramError(ArithmeticError):
    """An optimisation over the cone has no finite optimum.

    For lower previsions this is the operational signature of an
    inconsistent assessment set: every price becomes acceptable.
    """


class InfeasibleProgramError(ArithmeticError):
    """A linear program that was expected to be feasible is not."""


class InvalidStateError(ValueError):
    """A moment functional violates a generator constraint or L(1) = 1."""


class ZeroLikelihoodError(ZeroDivisionError):
    """Conditioning on a likelihood whose prevision is zero."""
