"""
Hadamard matrices: Sylvester doubling, regular and Bush-type predicates,
unbiasedness witnesses, and the Latin-square construction of mutually
unbiased Bush-type (MUBH) families.
"""

import logging
from dataclasses import dataclass
from itertools import combinations, product
from math import isqrt

import numpy as np

from .core_matrix import SignMatrix, identity, kronecker, mat_mul, ones
from .errors import ConstructionError, DimensionError, FieldError, NotHadamardError
from .gfl import gen_msls, power_of_two_exponent

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class HadamardMatrix:
    """±1 matrix with body·bodyᵗ = order·I, checked on construction."""

    body: SignMatrix

    def __post_init__(self):
        body = self.body if isinstance(self.body, SignMatrix) else SignMatrix(self.body)
        object.__setattr__(self, "body", body)
        if body.rows != body.cols:
            raise DimensionError(f"Hadamard matrix must be square, got {body.shape}")
        if np.any(body.entries == 0):
            raise NotHadamardError("Hadamard matrix has a zero entry")
        gram = mat_mul(body, body.transpose())
        if gram != identity(body.rows, "int").scalar_mul(body.rows):
            rows = np.argwhere(gram.entries - body.rows * np.eye(body.rows, dtype=np.int64))[0]
            raise NotHadamardError(f"Rows {int(rows[0])} and {int(rows[1])} are not orthogonal")

    @property
    def order(self):
        return self.body.rows

    @property
    def entries(self):
        return self.body.entries

    def __eq__(self, other):
        return isinstance(other, HadamardMatrix) and self.body == other.body

    __hash__ = None

    def __repr__(self):
        return f"HadamardMatrix(order={self.order})"


@dataclass(frozen=True)
class BushLayout:
    """Order 4n² split into 2n x 2n blocks of size 2n."""

    order: int
    block: int

    def __post_init__(self):
        if self.block < 1 or self.order != self.block * self.block:
            raise DimensionError(f"Order {self.order} is not the square of block size {self.block}")

    @classmethod
    def for_order(cls, order):
        root = isqrt(order)
        if root * root != order:
            raise DimensionError(f"Order {order} is not a perfect square")
        return cls(order, root)

    @property
    def n(self):
        return self.block // 2


def sylvester(k):
    """Order 2^k by doubling; the first row is all ones."""
    if k < 0:
        raise ConstructionError("Sylvester order exponent must be >= 0")
    entries = np.ones((1, 1), dtype=np.int64)
    for _ in range(k):
        entries = np.block([[entries, entries], [entries, -entries]])
    return HadamardMatrix(SignMatrix(entries))


def row_and_column_sums(h):
    entries = h.entries.astype(np.int64)
    return entries.sum(axis=1), entries.sum(axis=0)


def is_regular(h):
    rows, cols = row_and_column_sums(h)
    constant = int(rows[0])
    regular = bool(np.all(rows == constant) and np.all(cols == constant))
    if regular and constant * constant != h.order:
        raise NotHadamardError(f"Regular with line sum {constant}, but {constant}² != {h.order}")
    return regular


def is_bush_type(h):
    """Diagonal 2n-blocks all-ones; off-diagonal blocks with zero row and column sums."""
    layout = BushLayout.for_order(h.order)
    b = layout.block
    blocks = h.entries.astype(np.int64).reshape(b, b, b, b).transpose(0, 2, 1, 3)
    for i in range(b):
        if not np.all(blocks[i, i] == 1):
            return False
    row_sums = blocks.sum(axis=3)
    col_sums = blocks.sum(axis=2)
    off = ~np.eye(b, dtype=bool)
    return bool(np.all(row_sums[off] == 0) and np.all(col_sums[off] == 0))


def is_bush_type_by_block_sums(h):
    """L·X = X·L = 2n·X with X = I_{2n} ⊗ J_{2n}."""
    layout = BushLayout.for_order(h.order)
    x = kronecker(identity(layout.block), ones(layout.block))
    target = x.scalar_mul(layout.block)
    return mat_mul(h.body, x) == target and mat_mul(x, h.body) == target


def unbiased_witness(h, k):
    """
    L = H·Kᵗ / sqrt(N) when every entry of H·Kᵗ is ±sqrt(N), else None.
    """
    if h.order != k.order:
        raise DimensionError(f"Orders differ: {h.order} vs {k.order}")
    root = isqrt(h.order)
    if root * root != h.order:
        raise DimensionError(f"Order {h.order} is not a perfect square; no unbiased pair can exist")
    product_ = mat_mul(h.body, k.body.transpose()).entries
    if not np.all(np.abs(product_) == root):
        return None
    return HadamardMatrix(SignMatrix(product_ // root))


def bush_product_check(h, k):
    """The witness of an unbiased Bush-type pair is again Bush-type."""
    witness = unbiased_witness(h, k)
    if witness is None:
        raise NotHadamardError("Pair is not unbiased; no witness to check")
    by_blocks = is_bush_type(witness)
    by_sums = is_bush_type_by_block_sums(witness)
    if by_blocks != by_sums:
        raise ConstructionError("Bush-type criteria disagree on the witness")
    return by_blocks


def check_mubh_parameters(n, m):
    """Raise ConstructionError unless 2n is a power of two and 1 <= m <= 2n - 1."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ConstructionError(f"n must be a positive integer, got {n!r}")
    if not isinstance(m, (int, np.integer)):
        raise ConstructionError(f"m must be an integer, got {m!r}")
    try:
        power_of_two_exponent(2 * n)
    except FieldError as e:
        raise ConstructionError(f"2n = {2 * n} is not a power of two; construction unavailable") from e
    if not 1 <= m <= 2 * n - 1:
        raise ConstructionError(
            f"m = {m} violates 1 <= m <= 2n - 1 = {2 * n - 1} (the Krein bound caps a MUBH family of order {4 * n * n} at 2n - 1)"
        )


def bush_matrix_from_square(square, rows):
    """
    Block (i, j) is c_sᵗ·c_s where s = square(i, j) and c_s is row s of `rows`.
    """
    c = rows.astype(np.int64)
    outers = np.einsum("si,sj->sij", c, c)
    symbols = square.array() - 1
    b = square.side
    blocks = outers[symbols]
    return HadamardMatrix(SignMatrix(blocks.transpose(0, 2, 1, 3).reshape(b * b, b * b)))


def verify_mubh_family(family):
    """Bush-type, regular, pairwise unbiased, witness Bush-type; raises on the first failure."""
    for index, h in enumerate(family, start=1):
        if not is_bush_type(h):
            raise ConstructionError(f"H_{index} is not Bush-type")
        if not is_regular(h):
            raise ConstructionError(f"H_{index} is not regular")
    for (a, h), (b, k) in combinations(enumerate(family, start=1), 2):
        if unbiased_witness(h, k) is None:
            raise ConstructionError(f"H_{a} and H_{b} are not unbiased")
        if not bush_product_check(h, k):
            raise ConstructionError(f"Witness of H_{a}, H_{b} is not Bush-type")


def build_mubh(n, m):
    """m mutually unbiased Bush-type Hadamard matrices of order 4n², verified."""
    check_mubh_parameters(n, m)
    side = 2 * n
    rows = sylvester(power_of_two_exponent(side)).entries
    squares = gen_msls(side)[:m]
    family = [bush_matrix_from_square(square, rows) for square in squares]
    verify_mubh_family(family)
    logger.info("Built %d MUBH of order %d", m, side * side)
    return family


def enumerate_bush_type(order=4):
    """
    Every Bush-type Hadamard matrix of the given order, by exhaustive search
    over ±1 matrices. Practical for order 4 only (2^16 candidates).
    """
    layout = BushLayout.for_order(order)
    if order > 4:
        raise ConstructionError("Exhaustive Bush-type search is limited to order 4")
    cells = order * order
    codes = np.arange(1 << cells, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(cells)) & 1
    candidates = (1 - 2 * bits).reshape(-1, order, order)
    b = layout.block
    blocks = candidates.reshape(-1, b, b, b, b).transpose(0, 1, 3, 2, 4)
    keep = np.ones(len(candidates), dtype=bool)
    for i, j in product(range(b), repeat=2):
        if i == j:
            keep &= np.all(blocks[:, i, j] == 1, axis=(1, 2))
        else:
            keep &= np.all(blocks[:, i, j].sum(axis=2) == 0, axis=1)
            keep &= np.all(blocks[:, i, j].sum(axis=1) == 0, axis=1)
    grams = np.einsum("nij,nkj->nik", candidates, candidates)
    keep &= np.all(grams == order * np.eye(order, dtype=np.int64), axis=(1, 2))
    return [HadamardMatrix(SignMatrix(c)) for c in candidates[keep]]


def find_unbiased_pair(family):
    """First pair (a, b) of distinct members with an unbiased witness, else None."""
    for (a, h), (b, k) in combinations(enumerate(family), 2):
        if unbiased_witness(h, k) is not None:
            return a, b
    return None
