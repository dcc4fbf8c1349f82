"""
Scheme checks: axioms, closed-form intersection numbers, uniformity, the
strongly regular and Deza corollary, and the 3-class fusion.
"""

from ..errors import ImprimitivityError, SchemeAxiomError
from ..mubh_scheme import (
    first_mismatch,
    five_class_tensor,
    j_form_holds,
    srg_deza_parameters,
    three_class_tensor,
)
from ..scheme_core import fibers, fuse, is_deza, is_srg, is_uniform, verify_scheme
from .id import finding_id

FIBER_CLASSES = {"class5": (0, 1, 2), "class8": (0, 1, 2, 3, 8)}
THREE_CLASS_GROUPS = ([0], [3, 4], [5], [1, 2])


def scheme_axioms(context):
    if not context.is_scheme:
        return []
    tensor = context.tensor
    error = context.scheme_error
    finding = {
        'finding_id': finding_id('axioms', context.family),
        'type': 'scheme_axioms',
        'passed': tensor is not None,
        'family': context.family,
        'size': context.rels.size,
        'classes': context.rels.d,
    }
    if tensor is not None:
        finding['valencies'] = tensor.valencies().tolist()
        finding['intersection_numbers'] = tensor.as_lists()
        finding['description'] = f'{context.rels.d}-class scheme on {context.rels.size} vertices verified'
    else:
        finding['counterexample'] = error.counterexample
        finding['description'] = f'Scheme axiom failed: {error}'
    return [finding]


def closed_form_tensor(context):
    if context.tensor is None or not context.has_parameters or context.m < 2:
        return []
    builders = {"class3": three_class_tensor, "class5": five_class_tensor}
    if context.family not in builders:
        return []
    mismatch = first_mismatch(context.tensor, builders[context.family](context.n, context.m))
    finding = {
        'finding_id': finding_id('closed_form', context.family),
        'type': 'closed_form_tensor',
        'passed': mismatch is None,
        'family': context.family,
    }
    if mismatch:
        i, j, k, got, want = mismatch
        finding['mismatch'] = {'i': i, 'j': j, 'k': k, 'counted': got, 'closed_form': want}
        finding['description'] = f'p[{i}][{j}][{k}] counted {got}, closed form {want}'
    else:
        finding['description'] = 'Counted intersection numbers equal every closed-form product'
    return [finding]


def j_form(context):
    if context.family != "class5" or context.tensor is None or not context.has_parameters or context.m < 2:
        return []
    passed = j_form_holds(context.tensor, context.n, context.m)
    return [{
        'finding_id': finding_id('j_form', context.family),
        'type': 'j_form',
        'passed': passed,
        'description': 'A4² = A5² matches its J-form' if passed else 'A4² does not match its J-form'
    }]


def uniformity(context):
    if context.family not in FIBER_CLASSES or context.tensor is None:
        return []
    index_set = FIBER_CLASSES[context.family]
    try:
        result = is_uniform(context.rels, fibers(context.rels, index_set), context.tensor)
    except ImprimitivityError as e:
        return [{
            'finding_id': finding_id('uniform', context.family),
            'type': 'uniformity',
            'passed': False,
            'index_set': list(index_set),
            'description': f'Index set {list(index_set)} does not give fibers: {e}'
        }]
    return [{
        'finding_id': finding_id('uniform', context.family),
        'type': 'uniformity',
        'passed': result.uniform,
        'index_set': list(index_set),
        'counterexample': result.counterexample,
        'description': 'Scheme is uniform' if result.uniform else f'Scheme is not uniform: {result.reason}'
    }]


def srg_deza_corollary(context):
    """At m = 2n - 1, A5 is strongly regular and A4 is a Deza graph that is not strongly regular."""
    if context.family != "class5" or context.tensor is None or not context.has_parameters:
        return []
    # At n = 1 both graphs are perfect matchings, so A4 is trivially strongly regular.
    if context.n < 2 or context.m != 2 * context.n - 1:
        return []
    srg, deza = srg_deza_parameters(context.n)
    a4, a5 = context.rels.adjacency(4), context.rels.adjacency(5)
    found_srg, found_deza = is_srg(a5), is_deza(a4)
    passed = found_srg == srg and found_deza == deza and is_srg(a4) is None
    return [{
        'finding_id': finding_id('srg_deza', (context.n, context.m)),
        'type': 'srg_deza_corollary',
        'passed': passed,
        'srg_A5': list(found_srg) if found_srg else None,
        'deza_A4': list(found_deza) if found_deza else None,
        'expected_srg': list(srg),
        'expected_deza': list(deza),
        'description': f'A5 is SRG{tuple(srg)} and A4 is Deza{tuple(deza)}' if passed
        else f'Graph parameters differ: A5 {found_srg}, A4 {found_deza}'
    }]


def three_class_fusion(context):
    """B1 = A3 + A4, B2 = A5, B3 = A1 + A2 must fuse to the 3-class scheme."""
    if context.family != "class5" or context.tensor is None or not context.has_parameters or context.m < 2:
        return []
    finding = {
        'finding_id': finding_id('three_class_fusion', context.family),
        'type': 'three_class_fusion',
        'groups': [list(g) for g in THREE_CLASS_GROUPS],
    }
    try:
        fused = fuse(context.rels, THREE_CLASS_GROUPS)
    except SchemeAxiomError as e:
        return [{**finding, 'passed': False, 'description': f'Fusion is not a scheme: {e}'}]
    mismatch = first_mismatch(verify_scheme(fused), three_class_tensor(context.n, context.m))
    return [{
        **finding,
        'passed': mismatch is None,
        'description': 'Fusion reproduces the 3-class scheme' if mismatch is None
        else f'Fusion differs from the 3-class closed form at {mismatch[:3]}'
    }]
