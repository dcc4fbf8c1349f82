"""
Spectral checks against the printed eigenmatrices and Krein matrices.
"""

from fractions import Fraction

import numpy as np

from ..spectral import (
    displayed_krein,
    find_q_polynomial_ordering,
    q_from_p,
    q_structure,
)
from .id import finding_id

# (q_polynomial, q_bipartite, q_antipodal) claimed for the family
EXPECTED_Q_STRUCTURE = {
    "class3": (True, False, True),
    "fusion4": (True, True, True),
}


def _first_difference(a, b):
    diff = np.argwhere(a.entries != b.entries)
    if not len(diff):
        return None
    i, j = (int(v) for v in diff[0])
    return {'row': i, 'col': j, 'computed': a.entries[i, j], 'printed': b.entries[i, j]}


def q_certification(context):
    if context.tables is None or context.tensor is None:
        return []
    eigen = context.eigen
    finding = {
        'finding_id': finding_id('q_table', context.family),
        'type': 'q_certification',
        'passed': eigen is not None,
        'family': context.family,
        'Q': context.tables[1],
    }
    if eigen is None:
        finding['description'] = f'Printed Q is not the second eigenmatrix: {context.eigen_error}'
        return [finding]
    finding.update({
        'P_derived': eigen.P,
        'multiplicities': list(eigen.multiplicities),
        'materialized': eigen.materialized,
        'description': 'Idempotents from the printed Q are certified (E_jE_k = δE_j, ΣE_j = I, PQ = |X|I)'
    })
    return [finding]


def derived_p(context):
    if context.eigen is None or context.tables[0] is None:
        return []
    difference = _first_difference(context.eigen.P, context.tables[0])
    return [{
        'finding_id': finding_id('p_table', context.family),
        'type': 'derived_p',
        'passed': difference is None,
        'difference': difference,
        'description': 'Derived P equals the printed P' if difference is None
        else f'Derived P differs from the printed P at {difference["row"]}, {difference["col"]}'
    }]


def q_from_p_consistency(context):
    if context.eigen is None or context.tables[0] is None:
        return []
    eigen = context.eigen
    derived = q_from_p(context.tables[0], eigen.valencies, eigen.multiplicities)
    difference = _first_difference(derived, context.tables[1])
    return [{
        'finding_id': finding_id('q_from_p', context.family),
        'type': 'q_from_p_consistency',
        'passed': difference is None,
        'difference': difference,
        'description': 'Q recomputed from P equals the shipped Q' if difference is None
        else 'Q recomputed from P differs from the shipped Q'
    }]


def krein_nonnegative(context):
    if context.krein is None:
        return []
    negative = context.krein.first_negative()
    return [{
        'finding_id': finding_id('krein_nonnegative', context.family),
        'type': 'krein_nonnegative',
        'passed': negative is None,
        'negative_at': list(negative) if negative else None,
        'description': 'All Krein parameters are nonnegative' if negative is None
        else f'q{list(negative)} = {context.krein[negative]} is negative'
    }]


def printed_krein_matrix(context):
    if context.krein is None or context.family not in ("class3", "class5"):
        return []
    index, shown = displayed_krein(context.family, context.n, context.m)
    computed = context.krein.matrix(index)
    difference = _first_difference(computed, shown)
    return [{
        'finding_id': finding_id('krein_matrix', context.family),
        'type': 'printed_krein_matrix',
        'passed': difference is None,
        'index': index,
        'computed': computed,
        'difference': difference,
        'description': f'B_{index}* equals the printed matrix' if difference is None
        else f'B_{index}* differs from the printed matrix'
    }]


def krein_bound_value(context):
    """q[1][2][1] of the 5-class scheme equals (2n - m - 1)/(m + 1)."""
    if context.krein is None or context.family != "class5":
        return []
    value = context.krein[1, 2, 1]
    expected = Fraction(2 * context.n - context.m - 1, context.m + 1)
    return [{
        'finding_id': finding_id('krein_bound_value', context.family),
        'type': 'krein_bound_value',
        'passed': value == expected,
        'q_12_1': value,
        'description': f'q_(1,2)^1 = {value}'
    }]


def q_structure_flags(context):
    """Class 5 carries no claim, so its flags are reported without a verdict."""
    if context.krein is None or context.family not in (*EXPECTED_Q_STRUCTURE, "class5"):
        return []
    ordering = find_q_polynomial_ordering(context.krein)
    flags = q_structure(context.krein, ordering) if ordering else q_structure(context.krein)
    found = (flags.q_polynomial, flags.q_bipartite, flags.q_antipodal)
    expected = EXPECTED_Q_STRUCTURE.get(context.family, found)
    return [{
        'finding_id': finding_id('q_structure', context.family),
        'type': 'q_structure_flags',
        'passed': found == expected,
        'ordering': list(flags.ordering),
        'q_polynomial': flags.q_polynomial,
        'q_bipartite': flags.q_bipartite,
        'q_antipodal': flags.q_antipodal,
        'description': f'Q-structure flags {found} under ordering {list(flags.ordering)}'
    }]
