"""
Exact eigenmatrices, primitive idempotents and Krein parameters.

There is no eigensolver here. A candidate second eigenmatrix Q is turned into
idempotents E_j = (1/|X|) sum_i Q[i, j] A_i and certified by algebraic
identities. The identities are evaluated in the Bose-Mesner algebra itself:
an element is its coordinate vector in the basis A_0..A_d, products use the
intersection numbers, Schur products are coordinatewise and
trace(A_a A_b) = |X| k_a [a = b]. For small |X| the idempotents are also
multiplied out as explicit matrices.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from .config import setting
from .core_matrix import IntMatrix, RatMatrix, mat_mul
from .errors import ConstructionError, DimensionError, IdempotentError
from .scheme_core import verify_scheme

logger = logging.getLogger(__name__)

FAMILIES = ("class3", "class5", "class8", "fusion4")


def _rat(rows):
    return RatMatrix(np.array(rows, dtype=object))


def _class5_tables(n, m):
    p = [
        [1, 2 * n - 1, 2 * n * (2 * n - 1), 2 * n * m, n * (2 * n - 1) * m, n * (2 * n - 1) * m],
        [1, -1, 0, 0, n * m, -n * m],
        [1, 2 * n - 1, -2 * n, 2 * n * m, -n * m, -n * m],
        [1, 2 * n - 1, -2 * n, -2 * n, n, n],
        [1, -1, 0, 0, -n, n],
        [1, 2 * n - 1, 2 * n * (2 * n - 1), -2 * n, -n * (2 * n - 1), -n * (2 * n - 1)],
    ]
    q = [
        [1, 2 * n * (2 * n - 1), 2 * n - 1, (2 * n - 1) * m, 2 * n * (2 * n - 1) * m, m],
        [1, -2 * n, 2 * n - 1, (2 * n - 1) * m, -2 * n * m, m],
        [1, 0, -1, -m, 0, m],
        [1, 0, 2 * n - 1, -2 * n + 1, 0, -1],
        [1, 2 * n, -1, 1, -2 * n, -1],
        [1, -2 * n, -1, 1, 2 * n, -1],
    ]
    return p, q


def _class3_tables(n, m):
    p = [
        [1, n * (2 * n + 1) * m, n * (2 * n - 1) * m, 4 * n * n - 1],
        [1, n * m, -n * m, -1],
        [1, -n, n, -1],
        [1, -n * (2 * n + 1), -n * (2 * n - 1), 4 * n * n - 1],
    ]
    # Rows 1 and 2 of the last column are -1; +1 there breaks sum_j E_j = I.
    q = [
        [1, 4 * n * n - 1, (4 * n * n - 1) * m, m],
        [1, 2 * n - 1, -2 * n + 1, -1],
        [1, -2 * n - 1, 2 * n + 1, -1],
        [1, -1, -m, m],
    ]
    return p, q


def _class8_q(n, m):
    s = 2 * n
    return [
        [1, s * (s - 1), s, s - 1, s * (s - 1) * (m + 1), (s - 1) * m, s * m, s * (s - 1) * m, m],
        [1, -s, s, s - 1, -s * (m + 1), (s - 1) * m, s * m, -s * m, m],
        [1, s, -s, s - 1, -s * (m + 1), (s - 1) * m, -s * m, s * m, m],
        [1, 0, 0, -1, 0, -m, 0, 0, m],
        [1, 0, s, s - 1, 0, -s + 1, -s, 0, -1],
        [1, 0, -s, s - 1, 0, -s + 1, s, 0, -1],
        [1, s, 0, -1, 0, 1, 0, -s, -1],
        [1, -s, 0, -1, 0, 1, 0, s, -1],
        [1, -s * (s - 1), -s, s - 1, s * (s - 1) * (m + 1), (s - 1) * m, -s * m, -s * (s - 1) * m, m],
    ]


def _fusion4_q(n, m):
    v = 4 * n * n
    return [
        [1, v, (v - 1) * (m + 1), v * m, m],
        [1, 0, -m - 1, 0, m],
        [1, 2 * n, 0, -2 * n, -1],
        [1, -2 * n, 0, 2 * n, -1],
        [1, -v, (v - 1) * (m + 1), -v * m, m],
    ]


def _check_family(family, n, m):
    if family not in FAMILIES:
        raise ConstructionError(f"Unknown scheme family {family!r}; expected one of {', '.join(FAMILIES)}")
    if n < 1 or not 1 <= m <= 2 * n - 1:
        raise ConstructionError(f"Parameters n={n}, m={m} outside n >= 1, 1 <= m <= 2n - 1")


def closed_form_PQ(n, m, family):
    """(P, Q) tables for a family; P is None for class8 and fusion4."""
    _check_family(family, n, m)
    if family == "class5":
        p, q = _class5_tables(n, m)
        return _rat(p), _rat(q)
    if family == "class3":
        p, q = _class3_tables(n, m)
        return _rat(p), _rat(q)
    if family == "class8":
        return None, _rat(_class8_q(n, m))
    return None, _rat(_fusion4_q(n, m))


def q_from_p(P, valencies, multiplicities):
    """Q[i, j] = m_j P[j, i] / k_i."""
    p = P.entries
    size = len(valencies)
    return RatMatrix([[Fraction(int(multiplicities[j])) * p[j, i] / int(valencies[i]) for j in range(size)] for i in range(size)])


def p_from_q(Q, valencies, multiplicities):
    """P[i, j] = k_j Q[j, i] / m_i."""
    q = Q.entries
    size = len(valencies)
    return RatMatrix([[Fraction(int(valencies[j])) * q[j, i] / int(multiplicities[i]) for j in range(size)] for i in range(size)])


def displayed_krein(family, n, m):
    """(index i, printed B_i*) for the families that print a Krein matrix."""
    _check_family(family, n, m)
    if family == "class5":
        rows = [
            [0, 0, 0, 0, 0, 1],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 0, 1, 0, 0],
            [0, 0, m, m - 1, 0, 0],
            [0, m, 0, 0, m - 1, 0],
            [m, 0, 0, 0, 0, m - 1],
        ]
        return 5, _rat(rows)
    if family == "class3":
        v, r = 4 * n * n, Fraction(1, m + 1)
        rows = [
            [0, 1, 0, 0],
            [v - 1, 2 * (2 * n * n - m - 1) * r, v * r, 0],
            [0, v * m * r, ((v - 2) * m - 2) * r, v - 1],
            [0, 0, 1, 0],
        ]
        return 1, _rat(rows)
    if family == "class8":
        rows = [[0] * 9 for _ in range(9)]
        for t in range(4):
            rows[t][8 - t] = 1
        rows[4][4] = m
        for t in range(5, 9):
            rows[t][8 - t] = m
            rows[t][t] = m - 1
        return 8, _rat(rows)
    raise ConstructionError(f"No Krein matrix is printed for {family}")


class BoseMesner:
    """Coordinate arithmetic in the span of A_0..A_d."""

    def __init__(self, tensor, size):
        self.p = tensor.p.astype(object)
        self.d = tensor.d
        self.size = size
        self.valencies = tensor.valencies()

    def basis(self, a):
        u = np.array([Fraction(0)] * (self.d + 1), dtype=object)
        u[a] = Fraction(1)
        return u

    def identity(self):
        return self.basis(0)

    def ones(self):
        return np.array([Fraction(1)] * (self.d + 1), dtype=object)

    def product(self, u, v):
        return np.tensordot(v, np.tensordot(u, self.p, axes=(0, 0)), axes=(0, 0))

    def schur(self, u, v):
        return u * v

    def trace(self, u):
        return self.size * u[0]

    def trace_product(self, u, v):
        return self.size * sum(u[a] * v[a] * int(self.valencies[a]) for a in range(self.d + 1))

    def materialize(self, u, relmap):
        return RatMatrix(u[relmap.astype(np.int64)])


def _equal(u, v):
    return all(a == b for a, b in zip(u, v))


@dataclass(frozen=True, eq=False)
class EigenData:
    P: RatMatrix
    Q: RatMatrix
    size: int
    valencies: tuple
    multiplicities: tuple
    coords: np.ndarray
    algebra: BoseMesner
    relmap: np.ndarray
    materialized: bool

    @property
    def d(self):
        return len(self.valencies) - 1

    def idempotent(self, j):
        """E_j as an explicit rational matrix."""
        return self.algebra.materialize(self.coords[:, j], self.relmap)


def _materialized_check(rels, Q, size):
    """Multiply |X|·E_j as integer matrices; applies when Q is integral."""
    q = Q.entries
    if any(v.denominator != 1 for v in q.ravel()):
        logger.debug("Q is not integral; skipping the explicit-matrix check")
        return False
    rel = rels.relmap.astype(np.int64)
    scaled = [IntMatrix(np.array([int(v) for v in q[:, j]], dtype=np.int64)[rel]) for j in range(rels.d + 1)]
    total = np.zeros((size, size), dtype=np.int64)
    for j, f in enumerate(scaled):
        total += f.entries
        for k in range(j, rels.d + 1):
            product = mat_mul(f, scaled[k]).entries
            expected = size * f.entries if j == k else 0
            if not np.array_equal(product, np.broadcast_to(expected, product.shape)):
                raise IdempotentError(f"Explicit E_{j}E_{k} is not {'E_' + str(j) if j == k else '0'}")
    if not np.array_equal(total, size * np.eye(size, dtype=np.int64)):
        raise IdempotentError("Explicit idempotents do not sum to I")
    if not np.all(scaled[0].entries == 1):
        raise IdempotentError("Explicit E_0 is not J/|X|")
    return True


def idempotents_from_Q(rels, Q, tensor=None):
    """Build E_0..E_d from a candidate Q and certify them; IdempotentError if Q is not the scheme's."""
    tensor = verify_scheme(rels) if tensor is None else tensor
    d, size = rels.d, rels.size
    if Q.shape != (d + 1, d + 1):
        raise DimensionError(f"Q is {Q.rows}x{Q.cols}, expected {d + 1}x{d + 1}")
    algebra = BoseMesner(tensor, size)
    coords = Q.entries.astype(object) / size
    columns = [coords[:, j] for j in range(d + 1)]

    if not _equal(columns[0], algebra.ones() / size):
        raise IdempotentError("E_0 is not J/|X|: column 0 of Q is not all ones")
    total = sum(columns[1:], columns[0])
    if not _equal(total, algebra.identity()):
        raise IdempotentError("Idempotents do not sum to I")
    for j in range(d + 1):
        for k in range(j, d + 1):
            product = algebra.product(columns[j], columns[k])
            expected = columns[j] if j == k else np.zeros(d + 1, dtype=object)
            if not _equal(product, expected):
                what = "not idempotent" if j == k else f"not orthogonal to E_{k}"
                raise IdempotentError(f"E_{j} is {what}")

    multiplicities = [algebra.trace(c) for c in columns]
    if any(mult.denominator != 1 or mult <= 0 for mult in multiplicities):
        raise IdempotentError(f"Multiplicities {[str(x) for x in multiplicities]} are not positive integers")

    p = np.empty((d + 1, d + 1), dtype=object)
    for i in range(d + 1):
        for j in range(d + 1):
            image = algebra.product(algebra.basis(j), columns[i])
            eigenvalue = image[0] / columns[i][0]
            if not _equal(image, eigenvalue * columns[i]):
                raise IdempotentError(f"E_{i} is not an eigenvector of A_{j}")
            p[i, j] = eigenvalue
    P = RatMatrix(p)
    scaled_identity = RatMatrix(np.eye(d + 1, dtype=np.int64) * size)
    if mat_mul(P, Q) != scaled_identity or mat_mul(Q, P) != scaled_identity:
        raise IdempotentError("PQ != |X| I")

    materialized = False
    if size <= setting("verification", "materialize_limit"):
        materialized = _materialized_check(rels, Q, size)
    logger.debug("Certified %d idempotents on %d vertices", d + 1, size)
    return EigenData(
        P=P,
        Q=Q,
        size=size,
        valencies=tuple(int(k) for k in algebra.valencies),
        multiplicities=tuple(int(x) for x in multiplicities),
        coords=coords,
        algebra=algebra,
        relmap=rels.relmap,
        materialized=materialized,
    )


@dataclass(frozen=True, eq=False)
class KreinTensor:
    q: np.ndarray

    @property
    def d(self):
        return self.q.shape[0] - 1

    def __getitem__(self, index):
        return self.q[index]

    def matrix(self, i):
        """B_i* = (q[i][j][k]) with row j, column k."""
        return RatMatrix(self.q[i])

    def matrices(self):
        return [self.matrix(i) for i in range(self.d + 1)]

    def first_negative(self):
        for index in np.ndindex(self.q.shape):
            if self.q[index] < 0:
                return index
        return None

    def is_symmetric(self):
        return all(self.q[i, j, k] == self.q[j, i, k] for i, j, k in np.ndindex(self.q.shape))


def krein_params(eig):
    """q[i][j][k] = (|X| / m_k) trace((E_i ∘ E_j) E_k)."""
    algebra, coords = eig.algebra, eig.coords
    d = eig.d
    q = np.empty((d + 1, d + 1, d + 1), dtype=object)
    for i in range(d + 1):
        for j in range(i, d + 1):
            schur = algebra.schur(coords[:, i], coords[:, j])
            for k in range(d + 1):
                value = Fraction(eig.size, eig.multiplicities[k]) * algebra.trace_product(schur, coords[:, k])
                q[i, j, k] = q[j, i, k] = value
    return KreinTensor(q)


@dataclass(frozen=True)
class KreinBound:
    value: Fraction
    passed: bool


def krein_bound_check(n, m):
    """q_{1,2}^1 = (2n - m - 1)/(m + 1) of the 5-class scheme; nonnegative iff m <= 2n - 1."""
    value = Fraction(2 * n - m - 1, m + 1)
    return KreinBound(value, m <= 2 * n - 1)


@dataclass(frozen=True)
class QStructure:
    q_polynomial: bool
    q_bipartite: bool
    q_antipodal: bool
    ordering: tuple


def _ordered_b1(krein, ordering):
    first = ordering[1]
    return [[krein.q[first, a, b] for b in ordering] for a in ordering]


def q_structure(krein, ordering=None):
    """
    Flags read off B_1* under an ordering of the idempotents (ordering[0] = 0).

    Q-polynomial: tridiagonal with nonzero sub- and super-diagonal.
    Q-bipartite: additionally a zero diagonal.
    Q-antipodal: b*_j = c*_{d-j} for every j except floor(d/2), where
    b*_j = q_{1,j+1}^j and c*_j = q_{1,j-1}^j.
    """
    d = krein.d
    ordering = tuple(range(d + 1)) if ordering is None else tuple(ordering)
    if sorted(ordering) != list(range(d + 1)) or ordering[0] != 0:
        raise DimensionError(f"{ordering} is not an ordering of 0..{d} starting at 0")
    if d == 0:
        return QStructure(True, False, False, ordering)
    b1 = _ordered_b1(krein, ordering)
    tridiagonal = all(b1[a][b] == 0 for a in range(d + 1) for b in range(d + 1) if abs(a - b) > 1)
    bands = all(b1[a + 1][a] != 0 and b1[a][a + 1] != 0 for a in range(d))
    polynomial = tridiagonal and bands
    bipartite = polynomial and all(b1[a][a] == 0 for a in range(d + 1))
    antipodal = False
    if polynomial:
        b_star = [b1[j + 1][j] for j in range(d)]
        c_star = [None] + [b1[j - 1][j] for j in range(1, d + 1)]
        antipodal = all(b_star[j] == c_star[d - j] for j in range(d) if j != d // 2)
    return QStructure(polynomial, bipartite, antipodal, ordering)


def find_q_polynomial_ordering(krein):
    """
    First ordering (by choice of E_1) under which the scheme is Q-polynomial,
    else None. Tridiagonality forces each next idempotent once E_1 is fixed.
    """
    d = krein.d
    if d <= 1:
        return tuple(range(d + 1))
    for first in range(1, d + 1):
        ordering = [0, first]
        while len(ordering) <= d:
            current = ordering[-1]
            fresh = [k for k in range(d + 1) if k not in ordering and krein.q[first, current, k] != 0]
            if len(fresh) != 1:
                break
            ordering.append(fresh[0])
        if len(ordering) == d + 1 and q_structure(krein, ordering).q_polynomial:
            return tuple(ordering)
    return None


def matching_krein_index(krein, displayed):
    """Every i with B_i* equal to the displayed matrix."""
    return [i for i in range(krein.d + 1) if krein.matrix(i) == displayed]


def orderings_matching(krein, displayed, index):
    """Search relabelings of the non-trivial idempotents for one that reproduces a displayed B*."""
    d = krein.d
    target = displayed.entries
    for rest in permutations(range(1, d + 1)):
        ordering = (0,) + rest
        i = ordering[index]
        if all(krein.q[i, ordering[a], ordering[b]] == target[a, b] for a in range(d + 1) for b in range(d + 1)):
            return ordering
    return None
