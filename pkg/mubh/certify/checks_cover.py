"""
Double-cover checks: the printed 9-class tables and the projection back to the base.
"""

import numpy as np

from ..cover_fusion import project_to_base, verify_cover_tables
from .id import finding_id


def cover_tables(context):
    if context.cover is None:
        return []
    report = verify_cover_tables(context.cover)
    finding = {
        'finding_id': finding_id('cover_tables', context.family),
        'type': 'cover_tables',
        'passed': report.passed,
        'q_certified': report.q_certified,
        'krein_nonnegative': report.krein_nonnegative,
        'displayed_index': report.displayed_index,
        'matching_indices': report.matching_indices,
        'uniform': report.uniform,
    }
    if not report.q_certified:
        finding['description'] = f'Cover Q table rejected: {report.q_error}'
    elif report.krein_mismatch:
        j, k, got, want = report.krein_mismatch
        finding['krein_mismatch'] = {'row': j, 'col': k, 'computed': got, 'printed': want}
        finding['description'] = f'Printed Krein matrix is not B_{report.displayed_index}*'
    elif not report.uniform:
        finding['description'] = f'Cover is not uniform: {report.uniformity_reason}'
    else:
        finding['description'] = f'Cover Q certified; printed Krein matrix is B_{report.displayed_index}*'
    return [finding]


def cover_projection(context):
    if context.cover is None:
        return []
    base = project_to_base(context.cover)
    passed = base is not None and np.array_equal(base.relmap, context.cover.base.rels.relmap)
    return [{
        'finding_id': finding_id('cover_projection', context.family),
        'type': 'cover_projection',
        'passed': passed,
        'description': 'Cover projects onto the base 5-class scheme' if passed
        else 'Cover does not project onto its base scheme'
    }]
