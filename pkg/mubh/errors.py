"""
Exception hierarchy for the MUBH certification kit.
"""


class MubhError(Exception):
    """Base class for every error raised by the library."""


class DimensionError(MubhError):
    """Shapes do not fit the operation (inner dimensions, block sizes, orders)."""


class MatrixOverflowError(MubhError):
    """An integer result would leave the int64 range."""


class EntryError(MubhError):
    """A matrix holds an entry outside its alphabet."""


class FieldError(MubhError):
    """Finite field construction or arithmetic failure."""


class ConstructionError(MubhError):
    """Parameters for which a construction is unavailable."""


class NotHadamardError(MubhError):
    """A sign matrix failed H·Hᵗ = N·I."""


class SchemeAxiomError(MubhError):
    """
    An association-scheme axiom failed.

    `counterexample` names the first failing witness: for the product axiom a
    dict with keys i, j, k, x, y; for the partition axioms the offending pair.
    """

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample or {}


class ImprimitivityError(MubhError):
    """An index set does not induce a system of fibers."""


class IdempotentError(MubhError):
    """A candidate eigenmatrix does not give the primitive idempotents."""


class ExtractionError(MubhError):
    """A relation partition does not yield a MUBH family."""


class FormatError(MubhError):
    """Malformed matrix or scheme file."""
