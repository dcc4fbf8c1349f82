"""
Association schemes from mutually unbiased Bush-type Hadamard matrices, and back.

Vertices are numbered fiber-major: vertex a·4n² + i·2n + r is row r of block
i in fiber a, where fiber 0 carries the identity and fiber t carries H_t.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

import networkx as nx
import numpy as np

from .core_matrix import BinMatrix, IntMatrix, RatMatrix, SignMatrix, mat_mul
from .errors import (
    ConstructionError,
    DimensionError,
    ExtractionError,
    IdempotentError,
    MubhError,
    SchemeAxiomError,
)
from .hadamard import (
    HadamardMatrix,
    is_bush_type,
    is_regular,
    unbiased_witness,
    verify_mubh_family,
)
from .scheme_core import (
    DezaParameters,
    IntersectionTensor,
    RelationPartition,
    SRGParameters,
    verify_scheme,
)
from .spectral import closed_form_PQ, idempotents_from_Q

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GramianBundle:
    """B = 2n(M - I) split as B1 - B2; M is the Gramian of {I, H_1/2n, ..., H_m/2n}."""

    n: int
    m: int
    hadamards: tuple
    B: SignMatrix

    @cached_property
    def B1(self):
        return BinMatrix(self.B.entries == 1)

    @cached_property
    def B2(self):
        return BinMatrix(self.B.entries == -1)

    @cached_property
    def M(self):
        size = self.B.rows
        entries = np.eye(size, dtype=np.int64).astype(object) + self.B.entries.astype(object) * Fraction(1, 2 * self.n)
        return RatMatrix(entries)

    @property
    def order(self):
        return 4 * self.n * self.n

    @property
    def size(self):
        return (self.m + 1) * self.order


def gramian(hadamards, n, relaxed=False):
    """
    Gramian bundle of a family of pairwise unbiased regular Hadamard matrices
    of order 4n². m >= 2 is required unless relaxed is set.
    """
    hadamards = tuple(h if isinstance(h, HadamardMatrix) else HadamardMatrix(h) for h in hadamards)
    m = len(hadamards)
    if m < 1 or (m < 2 and not relaxed):
        raise ConstructionError(f"The Gramian needs at least 2 matrices, got {m}")
    if m == 1:
        logger.warning("Building a Gramian from a single matrix (relaxed path)")
    order, block = 4 * n * n, 2 * n
    for t, h in enumerate(hadamards, start=1):
        if h.order != order:
            raise DimensionError(f"H_{t} has order {h.order}, expected {order}")
        if not is_regular(h):
            raise ConstructionError(f"H_{t} is not regular")
        if not is_bush_type(h):
            raise ConstructionError(f"H_{t} is not Bush-type")

    size = (m + 1) * order
    b = np.zeros((size, size), dtype=np.int8)
    for t, h in enumerate(hadamards, start=1):
        rows = slice(t * order, (t + 1) * order)
        b[rows, :order] = h.entries
        b[:order, rows] = h.entries.T
    for (s, h), (t, k) in combinations(enumerate(hadamards, start=1), 2):
        product = mat_mul(h.body, k.body.transpose()).entries
        if not np.all(np.abs(product) == block):
            raise ConstructionError(f"H_{s} and H_{t} are not unbiased")
        scaled = product // block
        b[s * order:(s + 1) * order, t * order:(t + 1) * order] = scaled
        b[t * order:(t + 1) * order, s * order:(s + 1) * order] = scaled.T
    bundle = GramianBundle(n, m, hadamards, SignMatrix(b))

    fibers = np.arange(size) // order
    expected = fibers[:, None] != fibers[None, :]
    if not np.array_equal(bundle.B1.entries + bundle.B2.entries, expected.astype(np.int8)):
        raise ConstructionError("B1 + B2 is not (J - I) ⊗ J on fibers")
    logger.debug("Gramian of %d matrices of order %d", m, order)
    return bundle


def _integral(value, where):
    value = Fraction(value)
    if value.denominator != 1:
        raise ConstructionError(f"Closed-form coefficient {value} at {where} is not an integer")
    return int(value)


def _tensor_from_products(d, products):
    p = np.zeros((d + 1, d + 1, d + 1), dtype=np.int64)
    for i in range(d + 1):
        p[0, i, i] = p[i, 0, i] = 1
    for (i, j), terms in products.items():
        for k, value in terms.items():
            p[i, j, k] = p[j, i, k] = _integral(value, (i, j, k))
    return IntersectionTensor(p)


def three_class_tensor(n, m):
    """Closed-form intersection numbers of I, B1, B2, B3 (the B3 terms of B1², B2² carry the factor m)."""
    h = Fraction(n, 2)
    n2 = n * n
    return _tensor_from_products(3, {
        (1, 1): {0: (2 * n2 + n) * m, 1: (n2 + 3 * h) * (m - 1), 2: (n2 + h) * (m - 1), 3: (n2 + n) * m},
        (2, 2): {0: (2 * n2 - n) * m, 1: (n2 - h) * (m - 1), 2: (n2 - 3 * h) * (m - 1), 3: (n2 - n) * m},
        (1, 2): {1: (n2 - h) * (m - 1), 2: (n2 + h) * (m - 1), 3: n2 * m},
        (1, 3): {1: 2 * n2 + n - 1, 2: 2 * n2 + n},
        (2, 3): {1: 2 * n2 - n, 2: 2 * n2 - n - 1},
        (3, 3): {0: 4 * n2 - 1, 3: 4 * n2 - 2},
    })


def five_class_tensor(n, m):
    """Closed-form intersection numbers of A_0..A_5."""
    h = Fraction(n, 2)
    n2 = n * n
    a2a4 = {3: (2 * n - 1) * n, 4: (2 * n - 2) * n, 5: (2 * n - 2) * n}
    a3a4 = {2: m * n, 4: (m - 1) * n, 5: (m - 1) * n}
    square = {
        0: (2 * n2 - n) * m,
        1: (n2 - n) * m,
        2: (n2 - n) * m,
        3: (n2 - h) * (m - 1),
        4: (n2 - h) * (m - 1),
        5: (n2 - 3 * h) * (m - 1),
    }
    return _tensor_from_products(5, {
        (1, 1): {0: 2 * n - 1, 1: 2 * n - 2},
        (1, 2): {2: 2 * n - 1},
        (1, 3): {3: 2 * n - 1},
        (1, 4): {4: n - 1, 5: n},
        (1, 5): {4: n, 5: n - 1},
        (2, 2): {0: 2 * n * (2 * n - 1), 1: 2 * n * (2 * n - 1), 2: 2 * n * (2 * n - 2)},
        (2, 3): {4: 2 * n, 5: 2 * n},
        (2, 4): a2a4,
        (2, 5): a2a4,
        (3, 3): {0: 2 * m * n, 1: 2 * m * n, 3: 2 * n * (m - 1)},
        (3, 4): a3a4,
        (3, 5): a3a4,
        (4, 5): {1: n2 * m, 2: m * (n2 - n), 3: (n2 - h) * (m - 1), 4: (n2 - 3 * h) * (m - 1), 5: (n2 - h) * (m - 1)},
        (4, 4): square,
        (5, 5): square,
    })


def first_mismatch(counted, expected):
    """(i, j, k, counted, expected) at the first differing entry, else None."""
    diff = np.argwhere(counted.p != expected.p)
    if not len(diff):
        return None
    i, j, k = (int(v) for v in diff[0])
    return i, j, k, int(counted.p[i, j, k]), int(expected.p[i, j, k])


def _require_match(counted, expected, label):
    mismatch = first_mismatch(counted, expected)
    if mismatch:
        i, j, k, got, want = mismatch
        raise SchemeAxiomError(
            f"{label}: p[{i}][{j}][{k}] counted {got}, closed form {want}",
            {"i": i, "j": j, "k": k},
        )


def j_form_holds(tensor, n, m):
    """A4² = n²m I + (n²-n)m J + n((m+1)/2 - n)(A3+A4) + n(3/2 - m/2 - n) A5, as coefficients."""
    j = (n * n - n) * m
    expected = [
        n * n * m + j,
        j,
        j,
        j + n * (Fraction(m + 1, 2) - n),
        j + n * (Fraction(m + 1, 2) - n),
        j + n * (Fraction(3, 2) - Fraction(m, 2) - n),
    ]
    return all(tensor.p[4, 4, k] == expected[k] for k in range(6))


@dataclass(frozen=True, eq=False)
class ThreeClassScheme:
    n: int
    m: int
    rels: RelationPartition
    tensor: IntersectionTensor


@dataclass(frozen=True, eq=False)
class FiveClassScheme:
    n: int
    m: int
    rels: RelationPartition
    tensor: IntersectionTensor

    def adjacency(self, i):
        return self.rels.adjacency(i)


def _coordinates(n, m):
    order, block = 4 * n * n, 2 * n
    v = np.arange((m + 1) * order)
    return v // order, (v % order) // block


def build_three_class(bundle, method="auto"):
    """I, B1, B2, B3 = I_{m+1} ⊗ J_{4n²} - I as classes 0..3, verified against the closed form."""
    if bundle.m < 2:
        raise ConstructionError("The 3-class scheme needs m >= 2")
    logger.info("Building 3-class scheme for n=%d, m=%d", bundle.n, bundle.m)
    fiber, _ = _coordinates(bundle.n, bundle.m)
    relmap = np.where(bundle.B.entries == 1, 1, np.where(bundle.B.entries == -1, 2, 3))
    relmap[(fiber[:, None] != fiber[None, :]) & (bundle.B.entries == 0)] = -1
    np.fill_diagonal(relmap, 0)
    if (relmap < 0).any():
        raise ConstructionError("B has a zero entry between fibers")
    rels = RelationPartition(relmap, 3)
    tensor = verify_scheme(rels, method)
    _require_match(tensor, three_class_tensor(bundle.n, bundle.m), "3-class scheme")
    return ThreeClassScheme(bundle.n, bundle.m, rels, tensor)


def five_class_relmap(bundle):
    fiber, blk = _coordinates(bundle.n, bundle.m)
    same_fiber = fiber[:, None] == fiber[None, :]
    same_block = blk[:, None] == blk[None, :]
    b = bundle.B.entries
    a3 = ~same_fiber & same_block
    bad = np.argwhere(a3 & (b != 1))
    if len(bad):
        x, y = (int(v) for v in bad[0])
        raise ConstructionError(f"A4 = B1 - A3 is negative at ({x}, {y}); the input is not Bush-type")
    relmap = np.empty(b.shape, dtype=np.int8)
    relmap[same_fiber & same_block] = 1
    relmap[same_fiber & ~same_block] = 2
    relmap[a3] = 3
    relmap[~same_fiber & ~same_block & (b == 1)] = 4
    relmap[~same_fiber & (b == -1)] = 5
    np.fill_diagonal(relmap, 0)
    return relmap


def build_five_class(bundle, method="auto"):
    """A_0..A_5 from a Bush-type bundle, verified; closed forms compared for m >= 2."""
    logger.info("Building 5-class scheme for n=%d, m=%d", bundle.n, bundle.m)
    rels = RelationPartition(five_class_relmap(bundle), 5)
    tensor = verify_scheme(rels, method)
    if bundle.m >= 2:
        _require_match(tensor, five_class_tensor(bundle.n, bundle.m), "5-class scheme")
        if not j_form_holds(tensor, bundle.n, bundle.m):
            raise SchemeAxiomError("A4² does not match its J-form")
    else:
        logger.warning("m = 1: the 5-class scheme is checked by its axioms only")

    a4, a5 = rels.relmap == 4, rels.relmap == 5
    plus = BinMatrix(a4 | a5)
    minus = SignMatrix(a4.astype(np.int8) - a5.astype(np.int8))
    if np.any(mat_mul(plus, minus).entries):
        raise SchemeAxiomError("(A4 + A5)(A4 - A5) != 0")
    if mat_mul(BinMatrix(a4), BinMatrix(a4)) != mat_mul(BinMatrix(a5), BinMatrix(a5)):
        raise SchemeAxiomError("A4A4 != A5A5")
    return FiveClassScheme(bundle.n, bundle.m, rels, tensor)


def srg_deza_parameters(n):
    """Parameters of A5 (strongly regular) and A4 (Deza) when m = 2n - 1."""
    v, k = 8 * n ** 3, n * (2 * n - 1) ** 2
    low, high = n * (n - 1) * (2 * n - 3), n * (n - 1) * (2 * n - 1)
    return SRGParameters(v, k, low, high), DezaParameters(v, k, high, low)


@dataclass(frozen=True, eq=False)
class ExtractedFamily:
    hadamards: list
    permutation: list


def _components(mask):
    graph = nx.from_numpy_array(mask.astype(np.int8))
    return sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])


def canonical_five_class_relmap(n, m):
    """The A_1, A_2, A_3 pattern every normalized scheme must show; A_4/A_5 cells read -1."""
    fiber, blk = _coordinates(n, m)
    same_fiber = fiber[:, None] == fiber[None, :]
    same_block = blk[:, None] == blk[None, :]
    relmap = np.full(same_fiber.shape, -1, dtype=np.int8)
    relmap[same_fiber & same_block] = 1
    relmap[same_fiber & ~same_block] = 2
    relmap[~same_fiber & same_block] = 3
    np.fill_diagonal(relmap, 0)
    return relmap


def normalize_vertex_order(rels, n, m):
    """
    Permutation putting A_1, A_2, A_3 into their Kronecker forms.

    Fibers are the components of A_0 + A_1 + A_2 ordered by smallest vertex;
    blocks are the components of A_0 + A_1. Blocks of fiber 0 keep the order of
    their smallest vertex, and every other block takes the position of the
    fiber-0 block it is joined to by A_3. Vertices inside a block are sorted.
    """
    order, side = 4 * n * n, 2 * n
    fibers = _components(rels.mask((0, 1, 2)))
    blocks = _components(rels.mask((0, 1)))
    if len(fibers) != m + 1 or any(len(f) != order for f in fibers):
        raise ExtractionError(f"A_0 + A_1 + A_2 does not split the vertices into {m + 1} fibers of size {order}")
    if any(len(b) != side for b in blocks):
        raise ExtractionError(f"A_0 + A_1 does not split the vertices into blocks of size {side}")
    owner = {v: index for index, fiber in enumerate(fibers) for v in fiber}
    by_fiber = [[] for _ in fibers]
    for b in blocks:
        by_fiber[owner[b[0]]].append(b)
    anchor = {v: position for position, b in enumerate(by_fiber[0]) for v in b}

    permutation = [v for b in by_fiber[0] for v in b]
    a3 = rels.relmap == 3
    for index in range(1, m + 1):
        placed = [None] * side
        for b in by_fiber[index]:
            partners = {anchor[int(v)] for v in np.flatnonzero(a3[b[0]]) if int(v) in anchor}
            position = partners.pop() if len(partners) == 1 else None
            if position is None or placed[position] is not None:
                raise ExtractionError(f"Block at vertex {b[0]} of fiber {index} is not matched to one fiber-0 block by A_3")
            placed[position] = b
        permutation.extend(v for b in placed for v in b)

    canonical = rels.relmap[np.ix_(permutation, permutation)]
    pattern = canonical_five_class_relmap(n, m)
    fixed = pattern >= 0
    if not np.array_equal(canonical[fixed], pattern[fixed]) or np.any(np.isin(canonical[~fixed], (0, 1, 2, 3))):
        raise ExtractionError("A_1, A_2, A_3 do not take their Kronecker forms after normalization")
    return permutation


def _sign_table(Q, n, m):
    """2n·(m+1)/|X|·(Q[i,0] + Q[i,1] + Q[i,2]) per class i: the coefficients of 2n·G."""
    size = (m + 1) * 4 * n * n
    q = Q.entries
    table = []
    for i in range(6):
        value = 2 * n * Fraction(m + 1, size) * (q[i, 0] + q[i, 1] + q[i, 2])
        table.append(_integral(value, i))
    return np.array(table, dtype=np.int64)


def _check_fiber_identities(s, canonical, n, m):
    order = 4 * n * n

    def span(indices):
        return np.concatenate([np.arange(t * order, (t + 1) * order) for t in indices])

    for k in range(1, m + 1):
        idx = span((0, k))
        bar = IntMatrix(s[np.ix_(idx, idx)])
        if mat_mul(bar, bar) != bar.scalar_mul(4 * n):
            raise ExtractionError(f"Two-fiber identity G² = 2G fails on fibers (0, {k})")
        rel = canonical[np.ix_(idx, idx)]
        a3 = BinMatrix(rel == 3)
        target = IntMatrix(np.isin(rel, (0, 1, 3)).astype(np.int64) * 2 * n)
        if mat_mul(a3, bar) != target:
            raise ExtractionError(f"A_3·G identity fails on fibers (0, {k})")
    for k, l in combinations(range(1, m + 1), 2):
        idx = span((0, k, l))
        bar = IntMatrix(s[np.ix_(idx, idx)])
        if mat_mul(bar, bar) != bar.scalar_mul(6 * n):
            raise ExtractionError(f"Three-fiber identity G² = 3G fails on fibers (0, {k}, {l})")


def extract_mubh(rels, n, m):
    """Recover m MUBH of order 4n² from a scheme with the 5-class eigenmatrices."""
    order = 4 * n * n
    if rels.d != 5 or rels.size != (m + 1) * order:
        raise ExtractionError(f"Expected a 5-class scheme on {(m + 1) * order} vertices, got d={rels.d} on {rels.size}")
    try:
        tensor = verify_scheme(rels)
        _, Q = closed_form_PQ(n, m, "class5")
        idempotents_from_Q(rels, Q, tensor)
    except (SchemeAxiomError, IdempotentError, ConstructionError) as e:
        raise ExtractionError(f"Input is not a 5-class MUBH scheme: {e}") from e

    permutation = normalize_vertex_order(rels, n, m)
    canonical = rels.relmap[np.ix_(permutation, permutation)].astype(np.int64)
    s = _sign_table(Q, n, m)[canonical]

    fiber = np.arange(rels.size) // order
    off = fiber[:, None] != fiber[None, :]
    if not np.all(np.abs(s[off]) == 1):
        raise ExtractionError("An off-diagonal block of 2n·G is not ±1-valued")
    if not np.array_equal(s[~off], (2 * n * np.eye(rels.size, dtype=np.int64))[~off]):
        raise ExtractionError("A diagonal block of 2n·G is not 2n·I")
    _check_fiber_identities(s, canonical, n, m)

    try:
        hadamards = [HadamardMatrix(SignMatrix(s[k * order:(k + 1) * order, :order])) for k in range(1, m + 1)]
        verify_mubh_family(hadamards)
    except MubhError as e:
        raise ExtractionError(f"Extracted matrices are not MUBH: {e}") from e
    logger.info("Extracted %d MUBH of order %d", m, order)
    return ExtractedFamily(hadamards, permutation)


def unbiased_pairs(hadamards):
    """Witness matrices for every pair, keyed by 1-based indices."""
    return {(a, b): unbiased_witness(h, k) for (a, h), (b, k) in combinations(enumerate(hadamards, start=1), 2)}
