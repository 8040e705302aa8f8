"""Exception hierarchy.

Errors split into two families: ``ValueError``-style input errors raised
for bad user input, and :class:`TheoremViolation` subclasses, which are
raised when a computed structure contradicts a known theorem and therefore
point at a bug in the engine rather than at the caller.
"""

from __future__ import annotations


class ClusterForgeError(Exception):
    """Base class for all errors raised by this package."""


class QuiverError(ClusterForgeError, ValueError):
    pass


class LoopError(QuiverError):
    pass


class TwoCycleError(QuiverError):
    pass


class NotAcyclic(QuiverError):
    pass


class NotConnected(QuiverError):
    pass


class NotDynkin(QuiverError):
    pass


class FormatError(ClusterForgeError, ValueError):
    pass


class NonExactDivision(ClusterForgeError, ArithmeticError):
    pass


class ZeroPolynomial(ClusterForgeError, ValueError):
    pass


class NegativeExponent(ClusterForgeError, ValueError):
    pass


class ShapeMismatch(ClusterForgeError, ValueError):
    pass


class TheoremViolation(ClusterForgeError):
    """A computed object contradicts a theorem the engine relies on."""


class InternalInconsistency(TheoremViolation):
    pass


class NegativeExt(TheoremViolation):
    pass


class MaximalityViolation(TheoremViolation):
    pass


class ComplementCountViolation(TheoremViolation):
    pass


class CycleInconsistency(TheoremViolation):
    pass


class NoMatchingModule(TheoremViolation):
    pass


class NotBijective(TheoremViolation):
    pass
