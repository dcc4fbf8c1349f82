"""
Mutually unbiased Bush-type Hadamard matrices and the association schemes they
generate, with exact certification of every claimed table.
"""

from .cover_fusion import double_cover, fusion_four, verify_cover_tables
from .errors import MubhError
from .hadamard import HadamardMatrix, build_mubh, verify_mubh_family
from .mubh_scheme import build_five_class, build_three_class, extract_mubh, gramian
from .scheme_core import RelationPartition, verify_scheme
from .spectral import closed_form_PQ, idempotents_from_Q, krein_params

__version__ = "0.1.0"

__all__ = [
    "HadamardMatrix",
    "MubhError",
    "RelationPartition",
    "build_five_class",
    "build_mubh",
    "build_three_class",
    "closed_form_PQ",
    "double_cover",
    "extract_mubh",
    "fusion_four",
    "gramian",
    "idempotents_from_Q",
    "krein_params",
    "verify_cover_tables",
    "verify_mubh_family",
    "verify_scheme",
]
