"""
Consolidated import of all certification checks.
"""

from .checks_cover import *
from .checks_hadamard import *
from .checks_scheme import *
from .checks_spectral import *

__all__ = [k for k in globals().keys() if not k.startswith("_")]

HADAMARD_CHECKS = [
    'hadamard_orthogonality',
    'bush_type',
    'regular',
    'pairwise_unbiased',
    'witness_bush_type',
    'krein_bound',
]

SCHEME_CHECKS = [
    'scheme_axioms',
    'closed_form_tensor',
    'j_form',
    'uniformity',
    'srg_deza_corollary',
    'three_class_fusion',
]

SPECTRAL_CHECKS = [
    'q_certification',
    'derived_p',
    'q_from_p_consistency',
    'krein_nonnegative',
    'printed_krein_matrix',
    'krein_bound_value',
    'q_structure_flags',
]

COVER_CHECKS = [
    'cover_tables',
    'cover_projection',
]


def get_all_check_functions():
    """Return every check function in registry order."""
    names = HADAMARD_CHECKS + SCHEME_CHECKS + SPECTRAL_CHECKS + COVER_CHECKS
    return [globals()[name] for name in names if name in globals()]
