"""
What a certification run looks at: a Hadamard family, a scheme, or both.
"""

import logging
from functools import cached_property

from ..errors import IdempotentError, MubhError, SchemeAxiomError
from ..hadamard import HadamardMatrix
from ..scheme_core import verify_scheme
from ..spectral import closed_form_PQ, idempotents_from_Q, krein_params

logger = logging.getLogger(__name__)

SCHEME_FAMILIES = ("class3", "class5", "class8", "fusion4")


class CertificationContext:
    """
    family is "mubh" for a bare Hadamard family or one of SCHEME_FAMILIES.
    n and m may be None for user-supplied input; checks that need the printed
    tables then do not apply.
    """

    def __init__(self, family, n=None, m=None, matrices=None, rels=None, tensor=None, cover=None):
        self.family = family
        self.n = n
        self.m = m
        self.matrices = list(matrices or [])
        self.rels = rels
        self.cover = cover
        self.scheme_error = None
        self.eigen_error = None
        if tensor is not None:
            self.__dict__["tensor"] = tensor

    def __repr__(self):
        return f"CertificationContext(family={self.family!r}, n={self.n}, m={self.m})"

    @property
    def has_parameters(self):
        return self.n is not None and self.m is not None

    @property
    def is_scheme(self):
        return self.family in SCHEME_FAMILIES and self.rels is not None

    @cached_property
    def hadamards(self):
        """HadamardMatrix per input matrix, None where H·Hᵗ != N·I."""
        out = []
        for matrix in self.matrices:
            try:
                out.append(matrix if isinstance(matrix, HadamardMatrix) else HadamardMatrix(matrix))
            except MubhError as e:
                logger.debug("Input matrix is not Hadamard: %s", e)
                out.append(None)
        return out

    @cached_property
    def tensor(self):
        if self.rels is None:
            return None
        try:
            return verify_scheme(self.rels)
        except SchemeAxiomError as e:
            self.scheme_error = e
            return None

    @cached_property
    def tables(self):
        """(P, Q) printed for this family, or None."""
        if not (self.is_scheme and self.has_parameters):
            return None
        return closed_form_PQ(self.n, self.m, self.family)

    @cached_property
    def eigen(self):
        if self.tensor is None or self.tables is None:
            return None
        try:
            return idempotents_from_Q(self.rels, self.tables[1], self.tensor)
        except IdempotentError as e:
            self.eigen_error = e
            return None

    @cached_property
    def krein(self):
        return None if self.eigen is None else krein_params(self.eigen)
