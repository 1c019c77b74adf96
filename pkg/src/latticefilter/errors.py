"""Exception types shared across the package.

Names follow the failure modes of the public operations; everything derives
from LatticeFilterError so callers can catch broadly.
"""
from __future__ import annotations


class LatticeFilterError(Exception):
    """Base class for all package-specific failures."""


class BadParameter(LatticeFilterError, ValueError):
    """A parameter is outside its documented domain."""


class CompositeModulus(LatticeFilterError, ValueError):
    """An operation requiring a prime modulus was given a composite one."""


class RankDeficient(LatticeFilterError, ValueError):
    """More orthonormal rows were requested than the column set supports."""


class SingularGram(LatticeFilterError, ArithmeticError):
    """Gram matrix is numerically singular (condition number over the cap)."""


class DuplicateNodes(LatticeFilterError, ValueError):
    """Vandermonde nodes closer than the separation tolerance."""


class InsufficientSamples(LatticeFilterError, RuntimeError):
    """A solver ran out of samples before the system was determined."""


class EmptySolutionSet(LatticeFilterError, RuntimeError):
    """The SIS box/kernel intersection contains no nonzero point."""


class Timeout(LatticeFilterError, RuntimeError):
    """An iterative sampler exceeded its draw budget."""


class ScaleExceeded(LatticeFilterError, ValueError):
    """An exhaustive simulation was asked to enumerate too large a space."""


class BadShape(LatticeFilterError, ValueError):
    """Matrix dimensions do not satisfy an operation's precondition."""
