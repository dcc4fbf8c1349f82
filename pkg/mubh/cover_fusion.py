"""
Double cover of the 5-class scheme (nine relations on two copies of X) and its
4-class fusion.

The cover keeps the two copies concatenated: vertex x of the second copy is
|X| + x. Each cover class is fixed by the base class of (x mod |X|, y mod |X|)
and by whether x and y lie in the same copy.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import IdempotentError
from .scheme_core import RelationPartition, fibers, fuse, is_uniform, verify_scheme
from .spectral import (
    closed_form_PQ,
    displayed_krein,
    idempotents_from_Q,
    krein_params,
    matching_krein_index,
)

logger = logging.getLogger(__name__)

# Base class -> cover class, within one copy and across the copies.
SAME_COPY = np.array([0, 1, 3, 4, 6, 7], dtype=np.int64)
OTHER_COPY = np.array([8, 2, 3, 5, 7, 6], dtype=np.int64)

FUSION_GROUPS = ([0], [1, 2, 3], [4, 6], [5, 7], [8])
COVER_FIBER_CLASSES = (0, 1, 2, 3, 8)


@dataclass(frozen=True, eq=False)
class CoverScheme:
    base: object
    rels: RelationPartition
    tensor: object


def double_cover(scheme5, method="auto"):
    logger.info("Building double cover for n=%d, m=%d", scheme5.n, scheme5.m)
    base = scheme5.rels.relmap.astype(np.int64)
    same, other = SAME_COPY[base], OTHER_COPY[base]
    relmap = np.block([[same, other], [other, same]])
    rels = RelationPartition(relmap, 8)
    return CoverScheme(scheme5, rels, verify_scheme(rels, method))


def project_to_base(cover):
    """Read the base scheme off either block row of the cover; None if the two disagree."""
    size = cover.rels.size // 2
    relmap = cover.rels.relmap.astype(np.int64)
    same_inverse = np.full(9, -1, dtype=np.int64)
    same_inverse[SAME_COPY] = np.arange(6)
    other_inverse = np.full(9, -1, dtype=np.int64)
    other_inverse[OTHER_COPY] = np.arange(6)
    within = same_inverse[relmap[:size, :size]]
    across = other_inverse[relmap[:size, size:]]
    if np.any(within < 0) or not np.array_equal(within, across):
        return None
    return RelationPartition(within, 5)


def fusion_four(cover, method="auto"):
    """B~1 = A~1 + A~2 + A~3, B~2 = A~4 + A~6, B~3 = A~5 + A~7, B~4 = A~8."""
    return fuse(cover.rels, FUSION_GROUPS, method)


@dataclass(frozen=True, eq=False)
class CoverReport:
    q_certified: bool
    q_error: str = ""
    derived_p: object = None
    krein_nonnegative: bool = False
    displayed_index: int = 8
    matching_indices: list = field(default_factory=list)
    krein_mismatch: tuple = None
    uniform: bool = False
    uniformity_reason: str = ""

    @property
    def passed(self):
        return self.q_certified and self.krein_nonnegative and bool(self.matching_indices) and self.uniform


def verify_cover_tables(cover):
    """Certify the 9x9 Q table and the printed Krein matrix; report which B_i* it is."""
    n, m = cover.base.n, cover.base.m
    uniformity = is_uniform(cover.rels, fibers(cover.rels, COVER_FIBER_CLASSES), cover.tensor)
    _, Q = closed_form_PQ(n, m, "class8")
    try:
        eig = idempotents_from_Q(cover.rels, Q, cover.tensor)
    except IdempotentError as e:
        logger.warning("Cover Q table rejected: %s", e)
        return CoverReport(False, q_error=str(e), uniform=uniformity.uniform, uniformity_reason=uniformity.reason)

    krein = krein_params(eig)
    shown_index, shown = displayed_krein("class8", n, m)
    matches = matching_krein_index(krein, shown)
    mismatch = None
    if shown_index not in matches:
        computed = krein.matrix(shown_index).entries
        j, k = (int(v) for v in np.argwhere(computed != shown.entries)[0])
        mismatch = (j, k, computed[j, k], shown.entries[j, k])
    return CoverReport(
        q_certified=True,
        derived_p=eig.P,
        krein_nonnegative=krein.first_negative() is None,
        displayed_index=shown_index,
        matching_indices=matches,
        krein_mismatch=mismatch,
        uniform=uniformity.uniform,
        uniformity_reason=uniformity.reason,
    )
