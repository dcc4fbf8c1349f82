"""
Hadamard-family checks: orthogonality, Bush-type, regularity, unbiasedness,
witness closure and the Krein bound on the family size.
"""

from itertools import combinations
from math import isqrt

import numpy as np

from ..core_matrix import mat_mul
from ..hadamard import bush_product_check, is_bush_type, is_regular, unbiased_witness
from ..spectral import krein_bound_check
from .id import finding_id


def _label(t):
    return f"H_{t}"


def hadamard_orthogonality(context):
    findings = []
    for t, (raw, h) in enumerate(zip(context.matrices, context.hadamards), start=1):
        passed = h is not None
        detail = {}
        if not passed:
            gram = mat_mul(raw, raw.transpose()).entries
            off = gram - raw.rows * np.eye(raw.rows, dtype=np.int64) if raw.rows == raw.cols else gram
            rows = np.argwhere(off != 0)
            if len(rows):
                detail['rows'] = [int(rows[0][0]), int(rows[0][1])]
        findings.append({
            'finding_id': finding_id('hadamard', _label(t)),
            'type': 'hadamard_orthogonality',
            'passed': passed,
            'matrix': _label(t),
            **detail,
            'description': f'{_label(t)} satisfies H·Hᵗ = N·I' if passed
            else f'{_label(t)} is not Hadamard (rows {detail.get("rows")} not orthogonal)'
        })
    return findings


def _square_order(h):
    root = isqrt(h.order)
    return root * root == h.order


def bush_type(context):
    findings = []
    for t, h in enumerate(context.hadamards, start=1):
        if h is None:
            continue
        passed = _square_order(h) and is_bush_type(h)
        findings.append({
            'finding_id': finding_id('bush', _label(t)),
            'type': 'bush_type',
            'passed': passed,
            'matrix': _label(t),
            'description': f'{_label(t)} is Bush-type' if passed else f'{_label(t)} is not Bush-type'
        })
    return findings


def regular(context):
    findings = []
    for t, h in enumerate(context.hadamards, start=1):
        if h is None:
            continue
        passed = is_regular(h)
        findings.append({
            'finding_id': finding_id('regular', _label(t)),
            'type': 'regular',
            'passed': passed,
            'matrix': _label(t),
            'row_sum': int(h.entries[0].astype(np.int64).sum()),
            'description': f'{_label(t)} is regular' if passed else f'{_label(t)} has unequal row or column sums'
        })
    return findings


def pairwise_unbiased(context):
    findings = []
    hadamards = [(t, h) for t, h in enumerate(context.hadamards, start=1) if h is not None]
    for (a, h), (b, k) in combinations(hadamards, 2):
        if h.order != k.order or not _square_order(h):
            passed, detail = False, {'reason': 'orders differ or are not perfect squares'}
        else:
            passed = unbiased_witness(h, k) is not None
            detail = {}
            if not passed:
                product = mat_mul(h.body, k.body.transpose()).entries
                x, y = (int(v) for v in np.argwhere(np.abs(product) != isqrt(h.order))[0])
                detail = {'entry': [x, y], 'value': int(product[x, y])}
        findings.append({
            'finding_id': finding_id(_label(a), _label(b)),
            'type': 'pairwise_unbiased',
            'passed': passed,
            'pair': [_label(a), _label(b)],
            **detail,
            'description': f'{_label(a)} and {_label(b)} are unbiased' if passed
            else f'{_label(a)} and {_label(b)} are not unbiased'
        })
    return findings


def witness_bush_type(context):
    """Each unbiased pair of Bush-type matrices has a Bush-type witness."""
    findings = []
    bush = [(t, h) for t, h in enumerate(context.hadamards, start=1)
            if h is not None and _square_order(h) and is_bush_type(h)]
    for (a, h), (b, k) in combinations(bush, 2):
        if h.order != k.order or unbiased_witness(h, k) is None:
            continue
        passed = bush_product_check(h, k)
        findings.append({
            'finding_id': finding_id(_label(a), _label(b)),
            'type': 'witness_bush_type',
            'passed': passed,
            'pair': [_label(a), _label(b)],
            'description': f'Witness of {_label(a)}, {_label(b)} is Bush-type' if passed
            else f'Witness of {_label(a)}, {_label(b)} is not Bush-type'
        })
    return findings


def krein_bound(context):
    if not context.has_parameters or context.family not in ("mubh", "class5"):
        return []
    bound = krein_bound_check(context.n, context.m)
    return [{
        'finding_id': finding_id('krein_bound', (context.n, context.m)),
        'type': 'krein_bound',
        'passed': bound.passed,
        'n': context.n,
        'm': context.m,
        'q_12_1': bound.value,
        'description': f'q_(1,2)^1 = {bound.value} for n={context.n}, m={context.m}; bound m <= {2 * context.n - 1}'
    }]
