"""Exception types shared across the package."""


class PTSusyError(Exception):
    """Base class for all errors raised by ptsusy."""


class EvaluationError(PTSusyError, ArithmeticError):
    """A function produced a non-finite value where a finite one is required."""


class DegenerateClosureError(PTSusyError, ValueError):
    """The closure denominator 1 - q*alpha vanishes."""


class ContourSingularityError(PTSusyError, ValueError):
    """A pole of the superpotential or a partner potential lies on the contour."""


class SingularShiftError(PTSusyError, ArithmeticError):
    """The shifted operator is singular to working tolerance.

    Inside inverse iteration this is a signal that the shift sits on an
    eigenvalue rather than a failure.
    """
