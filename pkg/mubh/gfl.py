"""
GF(2^k) arithmetic and Latin squares over it.

Field elements are the integers 0..2^k - 1 of the polynomial basis: bit t is
the coefficient of x^t. Each k uses one fixed primitive modulus (table below),
so every generated square is reproducible byte for byte. Field element v is
written as symbol v + 1, which sends 0 to symbol 1.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import galois
import numpy as np

from .errors import DimensionError, FieldError

logger = logging.getLogger(__name__)

# Primitive polynomials over GF(2), one per degree, as integers (bit t = x^t).
MODULI = {
    1: 0b11,                    # x + 1
    2: 0b111,                   # x^2 + x + 1
    3: 0b1011,                  # x^3 + x + 1
    4: 0b10011,                 # x^4 + x + 1
    5: 0b100101,                # x^5 + x^2 + 1
    6: 0b1000011,               # x^6 + x + 1
    7: 0b10001001,              # x^7 + x^3 + 1
    8: 0b100011101,             # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,            # x^9 + x^4 + 1
    10: 0b10000001001,          # x^10 + x^3 + 1
    11: 0b100000000101,         # x^11 + x^2 + 1
    12: 0b1000001010011,        # x^12 + x^6 + x^4 + x + 1
    13: 0b10000000011011,       # x^13 + x^4 + x^3 + x + 1
    14: 0b100010001000011,      # x^14 + x^10 + x^6 + x + 1
    15: 0b1000000000000011,     # x^15 + x + 1
    16: 0b10001000000001011,    # x^16 + x^12 + x^3 + x + 1
}


def is_irreducible(poly):
    if poly < 2:
        return False
    return galois.Poly.Int(poly).is_irreducible()


class Field:
    """GF(2^k) with the fixed modulus for k, backed by a galois field class."""

    def __init__(self, k, modulus=None):
        if not isinstance(k, int) or not 1 <= k <= 16:
            raise FieldError(f"Field degree k must be in 1..16, got {k!r}")
        self.k = k
        self.order = 1 << k
        self.modulus = modulus if modulus is not None else MODULI[k]
        if self.modulus.bit_length() - 1 != k or not is_irreducible(self.modulus):
            raise FieldError(f"Modulus {bin(self.modulus)} is not irreducible of degree {k}")

    @cached_property
    def gf(self):
        # The prime field takes no modulus; every degree-1 modulus gives the same field.
        if self.k == 1:
            return galois.GF(2)
        return galois.GF(self.order, irreducible_poly=self.modulus)

    def __eq__(self, other):
        return isinstance(other, Field) and (self.k, self.modulus) == (other.k, other.modulus)

    def __hash__(self):
        return hash((self.k, self.modulus))

    def __repr__(self):
        return f"GF(2^{self.k}, modulus={bin(self.modulus)})"

    def __call__(self, value):
        return FieldElem(self._check(value), self)

    def _check(self, value):
        if not 0 <= int(value) < self.order:
            raise FieldError(f"{value} is not an element of GF({self.order})")
        return int(value)

    def _lift(self, value):
        return self.gf(self._check(value))

    def elements(self):
        return [FieldElem(v, self) for v in range(self.order)]

    def add(self, a, b):
        return int(self._lift(a) + self._lift(b))

    def mul(self, a, b):
        return int(self._lift(a) * self._lift(b))

    def inv(self, a):
        if self._check(a) == 0:
            raise FieldError("Zero has no multiplicative inverse")
        return int(self._lift(a) ** -1)

    def mul_table(self):
        x = self.gf.elements
        return as_ints(x[:, None] * x[None, :])


def as_ints(array):
    return array.view(np.ndarray).astype(np.int64)


@dataclass(frozen=True)
class FieldElem:
    value: int
    field: Field

    def _same(self, other):
        if not isinstance(other, FieldElem) or other.field != self.field:
            raise FieldError("Fields do not match")
        return other.value

    def __add__(self, other):
        return FieldElem(self.field.add(self.value, self._same(other)), self.field)

    __sub__ = __add__

    def __mul__(self, other):
        return FieldElem(self.field.mul(self.value, self._same(other)), self.field)

    def inverse(self):
        return FieldElem(self.field.inv(self.value), self.field)

    def __repr__(self):
        return f"FieldElem({self.value}, GF({self.field.order}))"


def field_new(k):
    return Field(k)


def field_add(a, b):
    return a + b


def field_mul(a, b):
    return a * b


def field_inv(a):
    return a.inverse()


def power_of_two_exponent(q):
    """k with q == 2^k, k >= 1; FieldError otherwise."""
    if not isinstance(q, (int, np.integer)) or q < 2 or q & (q - 1):
        raise FieldError(f"{q} is not a power of two >= 2")
    return int(q).bit_length() - 1


@dataclass(frozen=True)
class LatinSquare:
    """
    s x s array over symbols 1..s.

    Only shape and symbol range are enforced here; the Latin property is what
    is_latin decides.
    """

    cells: tuple

    def __post_init__(self):
        cells = tuple(tuple(int(v) for v in row) for row in self.cells)
        side = len(cells)
        if side == 0 or any(len(row) != side for row in cells):
            raise DimensionError("A Latin square must be a non-empty square array")
        if any(not 1 <= v <= side for row in cells for v in row):
            raise DimensionError(f"Symbols must lie in 1..{side}")
        object.__setattr__(self, "cells", cells)

    @property
    def side(self):
        return len(self.cells)

    def array(self):
        return np.array(self.cells, dtype=np.int64)

    def row(self, r):
        return self.cells[r]


def is_latin(square):
    a = square.array()
    target = np.arange(1, square.side + 1)
    rows_ok = all(np.array_equal(np.sort(row), target) for row in a)
    cols_ok = all(np.array_equal(np.sort(col), target) for col in a.T)
    return rows_ok and cols_ok


def is_orthogonal(first, second):
    """Superposition yields all s^2 ordered pairs."""
    if first.side != second.side:
        raise DimensionError("Squares of different sides")
    pairs = set(zip(first.array().ravel().tolist(), second.array().ravel().tolist()))
    return len(pairs) == first.side ** 2


def is_suitable(first, second):
    """Every row of the first agrees with every row of the second in exactly one column."""
    if first.side != second.side:
        raise DimensionError("Squares of different sides")
    a, b = first.array(), second.array()
    agreements = (a[:, None, :] == b[None, :, :]).sum(axis=2)
    return bool(np.all(agreements == 1))


def mutually(predicate, squares):
    return all(predicate(x, y) for x, y in combinations(squares, 2))


def gen_mols_field(q):
    """
    q - 1 mutually orthogonal Latin squares L_a(i, j) = a*i + j, a != 0.

    Rows are listed from i = 0, so every first row is (1, 2, ..., q).
    """
    gf = Field(power_of_two_exponent(q)).gf
    x = gf.elements
    squares = [LatinSquare(as_ints(gf(alpha) * x[:, None] + x[None, :]) + 1) for alpha in range(1, q)]
    logger.debug("Generated %d MOLS of side %d", len(squares), q)
    return squares


def gen_msls(s):
    """
    s - 1 mutually suitable Latin squares M_a(i, j) = a*(j - i), a != 0.

    The diagonal is a*0 = 0, i.e. symbol 1 throughout. For a != b the
    equation a(c - i) = b(c - i') has the single solution c, which is the
    suitability property.
    """
    gf = Field(power_of_two_exponent(s)).gf
    x = gf.elements
    differences = x[None, :] - x[:, None]
    squares = [LatinSquare(as_ints(gf(alpha) * differences) + 1) for alpha in range(1, s)]
    logger.debug("Generated %d MSLS of side %d", len(squares), s)
    return squares
