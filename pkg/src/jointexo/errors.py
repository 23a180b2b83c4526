"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class JointExoError(Exception):
    """Base class for all errors raised by jointexo."""


class ShapeError(JointExoError, ValueError):
    """Matrix or vector dimensions are incompatible."""


class ValidationError(JointExoError, ValueError):
    """An input object violates its documented invariants."""


class NumericalError(JointExoError, ArithmeticError):
    """A computation produced a result outside numerical tolerance (NaN, residual imaginary part, ...)."""


class SolverError(JointExoError, RuntimeError):
    """The LP solver could not produce a usable answer."""


class SolverStallError(SolverError):
    """The simplex iteration cap was exceeded."""


class CapacityError(JointExoError, ValueError):
    """Problem too large for a brute-force routine."""
