"""Exception hierarchy shared by the library and the command line."""

from __future__ import annotations


class CutSeqError(ValueError):
    """Base class for all input and precondition failures raised by cutseq."""


class RadicandMismatchError(CutSeqError):
    pass


class CycleNotationError(CutSeqError):
    pass


class LiteralError(CutSeqError):
    pass


class DisconnectedSurfaceError(CutSeqError):
    pass


class SurfaceFormatError(CutSeqError):
    pass


class NotIsolatedError(CutSeqError):
    """Neither letter of an H/V word is isolated, so it cannot be derived."""


class UnbalancedError(CutSeqError):
    pass


class SlopeError(CutSeqError):
    pass


class IETError(CutSeqError):
    pass


class DegenerateLengthError(IETError):
    """The rotation parameter is zero, so half of the subintervals vanish."""


class GraphError(CutSeqError):
    pass


class EmptyOccurrenceError(CutSeqError):
    pass


class ModulusMismatchError(CutSeqError):
    pass


class SequenceFormatError(CutSeqError):
    pass


class TraceError(CutSeqError):
    pass
