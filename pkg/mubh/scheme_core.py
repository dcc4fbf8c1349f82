"""
Symmetric association schemes stored as a single relation map.

A RelationPartition holds an |X| x |X| array whose (x, y) entry is the class
of the pair; class 0 is the identity relation. verify_scheme computes the
intersection numbers p[i][j][k] exactly and fails on the first pair of
vertices where A_i·A_j is not constant on class k.
"""

import logging
from dataclasses import dataclass, field
from itertools import permutations
from typing import NamedTuple

import networkx as nx
import numpy as np

from .config import setting
from .core_matrix import BinMatrix, mat_mul
from .errors import DimensionError, EntryError, ImprimitivityError, SchemeAxiomError

logger = logging.getLogger(__name__)


def _frozen(array):
    array.setflags(write=False)
    return array


class RelationPartition:
    """Partition of X x X into classes 0..d given by a symmetric relation map."""

    def __init__(self, relmap, d=None):
        array = np.asarray(relmap)
        if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] == 0:
            raise DimensionError(f"Relation map must be a non-empty square array, got shape {array.shape}")
        if not np.issubdtype(array.dtype, np.integer):
            raise EntryError(f"Relation map entries must be integers, got dtype {array.dtype}")
        if array.min() < 0:
            raise EntryError("Relation map entries must be nonnegative")
        top = int(array.max())
        d = top if d is None else int(d)
        if top > d:
            raise EntryError(f"Relation map uses class {top} but d = {d}")

        asym = np.argwhere(array != array.T)
        if len(asym):
            x, y = (int(v) for v in asym[0])
            raise SchemeAxiomError(f"Relation map is not symmetric at ({x}, {y})", {"x": x, "y": y})
        diag = np.flatnonzero(np.diagonal(array) != 0)
        if len(diag):
            x = int(diag[0])
            raise SchemeAxiomError(f"Diagonal pair ({x}, {x}) is not in class 0", {"x": x, "y": x})
        off = np.argwhere((array == 0) & ~np.eye(len(array), dtype=bool))
        if len(off):
            x, y = (int(v) for v in off[0])
            raise SchemeAxiomError(f"Off-diagonal pair ({x}, {y}) is in class 0", {"x": x, "y": y})
        counts = np.bincount(array.ravel(), minlength=d + 1)
        missing = np.flatnonzero(counts == 0)
        if len(missing):
            raise SchemeAxiomError(f"Class {int(missing[0])} is empty", {"k": int(missing[0])})

        dtype = np.int8 if d < 127 else np.int32
        self.relmap = _frozen(array.astype(dtype))
        self.d = d
        self.size = len(array)

    def __eq__(self, other):
        return isinstance(other, RelationPartition) and self.d == other.d and np.array_equal(self.relmap, other.relmap)

    __hash__ = None

    def __repr__(self):
        return f"RelationPartition(size={self.size}, d={self.d})"

    def adjacency(self, i):
        if not 0 <= i <= self.d:
            raise DimensionError(f"No class {i} in a {self.d}-class partition")
        return BinMatrix(self.relmap == i)

    def mask(self, classes):
        return np.isin(self.relmap, list(classes))

    def valencies(self):
        """Class sizes seen from vertex 0; constant over vertices once the axioms hold."""
        return np.bincount(self.relmap[0], minlength=self.d + 1).astype(np.int64)

    def permuted(self, perm):
        """Relabel so that new vertex a is old vertex perm[a]."""
        perm = np.asarray(perm, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self.size)):
            raise DimensionError("Not a permutation of the vertex set")
        return RelationPartition(self.relmap[np.ix_(perm, perm)], self.d)

    def restricted(self, vertices):
        """Induced partition on a vertex subset; classes are not renumbered."""
        vertices = np.asarray(vertices, dtype=np.int64)
        sub = self.relmap[np.ix_(vertices, vertices)]
        present = np.unique(sub)
        lookup = np.zeros(self.d + 1, dtype=np.int64)
        lookup[present] = np.arange(len(present))
        return RelationPartition(lookup[sub]), present.tolist()


@dataclass(frozen=True, eq=False)
class IntersectionTensor:
    """p[i, j, k] = |{z : (x, z) in R_i, (z, y) in R_j}| for any (x, y) in R_k."""

    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", _frozen(np.asarray(self.p, dtype=np.int64).copy()))

    @property
    def d(self):
        return self.p.shape[0] - 1

    def __getitem__(self, index):
        return int(self.p[index])

    def __eq__(self, other):
        return isinstance(other, IntersectionTensor) and np.array_equal(self.p, other.p)

    __hash__ = None

    def valencies(self):
        return np.array([self.p[i, i, 0] for i in range(self.d + 1)], dtype=np.int64)

    def coefficients(self, i, j):
        """A_i·A_j as {k: p_ij^k} over the nonzero terms."""
        return {k: int(v) for k, v in enumerate(self.p[i, j]) if v}

    def as_lists(self):
        return self.p.tolist()


def _product_tensor(rels):
    d = rels.d
    p = np.zeros((d + 1, d + 1, d + 1), dtype=np.int64)
    adj = [rels.adjacency(i) for i in range(d + 1)]
    firsts = [tuple(np.argwhere(rels.relmap == k)[0]) for k in range(d + 1)]
    for i in range(d + 1):
        for j in range(i, d + 1):
            product = mat_mul(adj[i], adj[j]).entries
            for k in range(d + 1):
                expected = product[firsts[k]]
                bad = np.argwhere((rels.relmap == k) & (product != expected))
                if len(bad):
                    x, y = (int(v) for v in bad[0])
                    raise SchemeAxiomError(
                        f"(A_{i}A_{j}) is not constant on class {k}: {int(product[x, y])} at ({x}, {y}), "
                        f"{int(expected)} at {tuple(int(v) for v in firsts[k])}",
                        {"i": i, "j": j, "k": k, "x": x, "y": y},
                    )
                p[i, j, k] = p[j, i, k] = expected
    return p


def _counted_tensor(rels):
    d, size = rels.d, rels.size
    rel = rels.relmap.astype(np.int64)
    width = (d + 1) * (d + 1) * size
    columns = np.arange(size, dtype=np.int64)[None, :]
    p = np.zeros((d + 1, d + 1, d + 1), dtype=np.int64)
    filled = np.zeros(d + 1, dtype=bool)
    for x in range(size):
        idx = (rel[x][:, None] * (d + 1) + rel) * size + columns
        counts = np.bincount(idx.ravel(), minlength=width).reshape(d + 1, d + 1, size)
        classes = rel[x]
        for k in np.unique(classes[~filled[classes]]):
            y = int(np.flatnonzero(classes == k)[0])
            p[:, :, k] = counts[:, :, y]
            filled[k] = True
        diff = counts != p[:, :, classes]
        if diff.any():
            i, j, y = (int(v) for v in np.argwhere(diff)[0])
            k = int(classes[y])
            raise SchemeAxiomError(
                f"(A_{i}A_{j}) is not constant on class {k}: {int(counts[i, j, y])} at ({x}, {y}), expected {int(p[i, j, k])}",
                {"i": i, "j": j, "k": k, "x": x, "y": y},
            )
    return p


def _check_valency_identities(p):
    d = p.shape[0] - 1
    valency = np.array([p[i, i, 0] for i in range(d + 1)])
    for i in range(d + 1):
        for j in range(d + 1):
            if p[i, j, 0] != (valency[i] if i == j else 0):
                raise SchemeAxiomError(f"p[{i}][{j}][0] = {p[i, j, 0]} breaks the valency identity", {"i": i, "j": j, "k": 0})
        sums = p[i].sum(axis=0)
        if np.any(sums != valency[i]):
            k = int(np.flatnonzero(sums != valency[i])[0])
            raise SchemeAxiomError(f"sum_j p[{i}][j][{k}] = {sums[k]} differs from valency {valency[i]}", {"i": i, "k": k})
    if not np.array_equal(p, p.transpose(1, 0, 2)):
        raise SchemeAxiomError("Intersection numbers are not symmetric in i, j")


def verify_scheme(rels, method="auto"):
    """
    Verify the scheme axioms and return the intersection tensor.

    method "products" multiplies adjacency matrices; "counting" walks each
    vertex with bincount and never forms a product. "auto" picks counting
    above verification.direct_count_threshold vertices.
    """
    if method == "auto":
        method = "counting" if rels.size > setting("verification", "direct_count_threshold") else "products"
    if method == "products":
        p = _product_tensor(rels)
    elif method == "counting":
        p = _counted_tensor(rels)
    else:
        raise ValueError(f"Unknown method {method!r}")
    _check_valency_identities(p)
    logger.debug("Verified %d-class scheme on %d vertices by %s", rels.d, rels.size, method)
    return IntersectionTensor(p)


def recomposition_holds(rels, tensor):
    """A_i·A_j == sum_k p[i][j][k]·A_k for every i, j, using fancy indexing on the relation map."""
    adj = [rels.adjacency(i) for i in range(rels.d + 1)]
    rel = rels.relmap.astype(np.int64)
    for i in range(rels.d + 1):
        for j in range(rels.d + 1):
            if not np.array_equal(mat_mul(adj[i], adj[j]).entries, tensor.p[i, j][rel]):
                return False
    return True


@dataclass(frozen=True)
class FiberPartition:
    """Fibers of an index set I: the cliques of sum_{j in I} A_j, ordered by smallest vertex."""

    index_set: tuple
    fibers: tuple

    @property
    def count(self):
        return len(self.fibers)

    @property
    def fiber_size(self):
        return len(self.fibers[0])

    def assignment(self):
        out = np.empty(sum(len(f) for f in self.fibers), dtype=np.int64)
        for index, fiber in enumerate(self.fibers):
            out[list(fiber)] = index
        return out

    def permutation(self):
        """Vertex order that makes sum_{j in I} A_j equal to I_p ⊗ J_q."""
        return [v for fiber in self.fibers for v in fiber]


def fibers(rels, index_set):
    index_set = tuple(sorted(set(int(i) for i in index_set)))
    if 0 not in index_set:
        raise ImprimitivityError("The index set must contain 0")
    mask = rels.mask(index_set)
    graph = nx.from_numpy_array(mask.astype(np.int8))
    components = sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])
    size = len(components[0])
    for component in components:
        if len(component) != size:
            raise ImprimitivityError(f"Fibers of {list(index_set)} have unequal sizes {size} and {len(component)}")
        if not mask[np.ix_(component, component)].all():
            raise ImprimitivityError(f"Component containing vertex {component[0]} is not a clique of {list(index_set)}")
    return FiberPartition(index_set, tuple(tuple(c) for c in components))


@dataclass(frozen=True, eq=False)
class QuotientScheme:
    rels: RelationPartition
    classes: tuple
    fibers: FiberPartition


def relation_classes(tensor, index_set):
    """Classes of j ~ k iff p[i][j][k] != 0 for some i in I; the class of 0 first."""
    graph = nx.Graph()
    graph.add_nodes_from(range(tensor.d + 1))
    linked = np.argwhere(tensor.p[list(index_set)].any(axis=0))
    graph.add_edges_from((int(j), int(k)) for j, k in linked)
    return tuple(sorted((tuple(sorted(c)) for c in nx.connected_components(graph)), key=lambda c: c[0]))


def quotient_scheme(rels, index_set, tensor=None):
    """Quotient scheme on the fibers of index_set, with the relation classes I_0..I_t."""
    if tensor is None:
        tensor = verify_scheme(rels)
    partition = fibers(rels, index_set)
    classes = relation_classes(tensor, partition.index_set)
    if set(classes[0]) != set(partition.index_set):
        raise ImprimitivityError(f"Index set {list(partition.index_set)} is not closed: its class is {list(classes[0])}")
    lookup = np.empty(rels.d + 1, dtype=np.int64)
    for index, members in enumerate(classes):
        lookup[list(members)] = index
    block_class = lookup[rels.relmap.astype(np.int64)]
    p = partition.count
    quotient = np.zeros((p, p), dtype=np.int64)
    for a, u in enumerate(partition.fibers):
        for b, v in enumerate(partition.fibers):
            values = np.unique(block_class[np.ix_(u, v)])
            if len(values) != 1:
                raise ImprimitivityError(f"Fibers {a} and {b} meet relation classes {values.tolist()}")
            quotient[a, b] = values[0]
    logger.debug("Quotient by %s: %d fibers of size %d, %d classes", list(partition.index_set), p, partition.fiber_size, len(classes))
    return QuotientScheme(RelationPartition(quotient, len(classes) - 1), classes, partition)


@dataclass(frozen=True, eq=False)
class UniformityResult:
    uniform: bool
    coefficients: np.ndarray = None
    counterexample: dict = field(default_factory=dict)
    reason: str = ""

    def __bool__(self):
        return self.uniform


def is_uniform(rels, partition, tensor=None):
    """
    Uniform: class-1 quotient, and for distinct fibers U, V, W every block
    product A_i^{UV} A_j^{VW} equals sum_k a[i][j][k] A_k^{UW} with the same
    coefficients for every triple.
    """
    quotient = quotient_scheme(rels, partition.index_set, tensor)
    if quotient.rels.d != 1:
        return UniformityResult(False, reason=f"quotient has {quotient.rels.d} classes, not 1")
    d = rels.d
    cross = [k for k in range(d + 1) if k not in partition.index_set]
    rel = rels.relmap
    a = np.zeros((d + 1, d + 1, d + 1), dtype=np.int64)
    seen = np.zeros((d + 1, d + 1, d + 1), dtype=bool)
    blocks = {}

    def block(u, v, i):
        key = (u, v, i)
        if key not in blocks:
            blocks[key] = BinMatrix(rel[np.ix_(partition.fibers[u], partition.fibers[v])] == i)
        return blocks[key]

    for u, v, w in permutations(range(partition.count), 3):
        uw = rel[np.ix_(partition.fibers[u], partition.fibers[w])]
        for i in cross:
            for j in cross:
                product = mat_mul(block(u, v, i), block(v, w, j)).entries
                for k in cross:
                    cells = uw == k
                    if not cells.any():
                        continue
                    values = product[cells]
                    if not seen[i, j, k]:
                        a[i, j, k] = values[0]
                        seen[i, j, k] = True
                    bad = np.flatnonzero(values != a[i, j, k])
                    if len(bad):
                        x, y = (int(t) for t in np.argwhere(cells)[bad[0]])
                        return UniformityResult(
                            False,
                            counterexample={"U": u, "V": v, "W": w, "i": i, "j": j, "k": k, "x": x, "y": y},
                            reason=f"a[{i}][{j}][{k}] differs on fiber triple ({u}, {v}, {w})",
                        )
    return UniformityResult(True, coefficients=_frozen(a))


class SRGParameters(NamedTuple):
    v: int
    k: int
    lam: int
    mu: int


class DezaParameters(NamedTuple):
    """b >= a."""

    v: int
    k: int
    b: int
    a: int


def _graph_square(a):
    entries = a.entries
    if entries.shape[0] != entries.shape[1]:
        raise DimensionError("Adjacency matrix must be square")
    if not np.array_equal(entries, entries.T) or np.any(np.diagonal(entries) != 0):
        raise EntryError("Adjacency matrix must be symmetric with zero diagonal")
    degrees = entries.astype(np.int64).sum(axis=1)
    return mat_mul(a, a).entries, degrees, entries.astype(bool)


def is_srg(a):
    """(v, k, lambda, mu) when A² = kI + lambda·A + mu·(J - I - A), else None."""
    square, degrees, edges = _graph_square(a)
    v, k = len(degrees), int(degrees[0])
    if np.any(degrees != k):
        return None
    non_edges = ~edges & ~np.eye(v, dtype=bool)
    if not edges.any() or not non_edges.any():
        return None
    lam, mu = np.unique(square[edges]), np.unique(square[non_edges])
    if len(lam) != 1 or len(mu) != 1:
        return None
    return SRGParameters(v, k, int(lam[0]), int(mu[0]))


def is_deza(a):
    """(v, k, b, a) for a regular graph whose common-neighbour counts take at most two values."""
    square, degrees, _ = _graph_square(a)
    v, k = len(degrees), int(degrees[0])
    if np.any(degrees != k):
        logger.debug("Deza test rejected: graph is not regular")
        return None
    values = np.unique(square[~np.eye(v, dtype=bool)])
    if len(values) > 2:
        return None
    return DezaParameters(v, k, int(values[-1]), int(values[0]))


def fuse(rels, groups, method="auto"):
    """
    Merge relation classes: group g of the result is the union of the classes
    in groups[g]. The groups must partition 0..d with groups[0] == [0]; the
    fused partition is verified before return.
    """
    groups = [sorted(int(i) for i in g) for g in groups]
    flat = sorted(i for g in groups for i in g)
    if flat != list(range(rels.d + 1)):
        raise DimensionError(f"Groups {groups} do not partition the classes 0..{rels.d}")
    if groups[0] != [0]:
        raise DimensionError("The first group must be exactly {0}")
    lookup = np.empty(rels.d + 1, dtype=np.int64)
    for index, members in enumerate(groups):
        lookup[members] = index
    fused = RelationPartition(lookup[rels.relmap.astype(np.int64)], len(groups) - 1)
    verify_scheme(fused, method)
    return fused
