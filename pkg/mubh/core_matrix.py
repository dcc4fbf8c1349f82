"""
Exact dense matrices over small integers and rationals.

Four families share one interface (rows, cols, entries, transpose, block,
trace, scalar_mul, equality):

    SignMatrix  entries in {-1, 0, +1}, stored as two packed bit planes
    BinMatrix   entries in {0, 1}, stored as one packed bit plane
    IntMatrix   int64 entries; any result leaving int64 raises
    RatMatrix   numpy object array of fractions.Fraction; floats are rejected

Every value is immutable after construction. Block layout is row-major
everywhere: block (i, j) of kronecker(a, b) is a[i, j] * b.
"""

import logging
from fractions import Fraction
from functools import cached_property

import numpy as np

from .config import setting
from .errors import DimensionError, EntryError, MatrixOverflowError

logger = logging.getLogger(__name__)

INT64_MAX = np.iinfo(np.int64).max


def _frozen(array):
    array.setflags(write=False)
    return array


def _to_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_, int, np.integer)):
        return Fraction(int(value))
    raise EntryError(f"Inexact or non-numeric entry {value!r}; only ints and Fractions are allowed")


_as_fractions = np.frompyfunc(_to_fraction, 1, 1)


def _check_shape(array):
    if array.ndim != 2:
        raise DimensionError(f"Expected a 2-d array, got shape {array.shape}")
    if array.shape[0] == 0 or array.shape[1] == 0:
        raise DimensionError(f"Matrix dimensions must be positive, got {array.shape}")


class _Dense:
    """Shared behaviour of the four matrix families."""

    family = "dense"

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __eq__(self, other):
        if not isinstance(other, _Dense):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.entries, other.entries))

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}({self.rows}x{self.cols})"

    def transpose(self):
        return type(self)(self.entries.T)

    def block(self, block_rows, block_cols, i, j):
        if self.rows % block_rows or self.cols % block_cols:
            raise DimensionError(
                f"{self.rows}x{self.cols} does not split into {block_rows}x{block_cols} blocks"
            )
        if not (0 <= i < self.rows // block_rows and 0 <= j < self.cols // block_cols):
            raise DimensionError(f"Block index ({i}, {j}) out of range")
        r0, c0 = i * block_rows, j * block_cols
        return type(self)(self.entries[r0:r0 + block_rows, c0:c0 + block_cols])

    def trace(self):
        if self.rows != self.cols:
            raise DimensionError("Trace of a non-square matrix")
        total = sum(self.entries[k, k] for k in range(self.rows))
        return total if isinstance(total, Fraction) else int(total)

    def scalar_mul(self, scalar):
        if isinstance(scalar, Fraction) or isinstance(self, RatMatrix):
            return RatMatrix(_as_fractions(self.entries.astype(object)) * _to_fraction(scalar))
        return IntMatrix(_checked_int_array(self.entries.astype(object) * int(scalar)))

    def __add__(self, other):
        return _combine(self, other, lambda x, y: x + y)

    def __sub__(self, other):
        return _combine(self, other, lambda x, y: x - y)

    def __neg__(self):
        return self.scalar_mul(-1)


class _PackedMatrix(_Dense):
    """
    Bit-packed storage: a nonzero plane and a sign plane, each row packed
    with np.packbits (big-endian bits, trailing pad bits zero).
    """

    alphabet = frozenset()

    def __init__(self, entries):
        array = np.asarray(entries)
        _check_shape(array)
        if array.dtype == np.bool_:
            array = array.astype(np.int8)
        elif array.dtype == object:
            array = _checked_int_array(array)
        elif not np.issubdtype(array.dtype, np.integer):
            raise EntryError(f"Entries of {type(self).__name__} must be integers, got dtype {array.dtype}")
        values = set(np.unique(array).tolist())
        if not values <= self.alphabet:
            raise EntryError(f"{type(self).__name__} entries must lie in {sorted(self.alphabet)}, found {sorted(values - self.alphabet)}")
        self.rows, self.cols = array.shape
        self._nz = _frozen(np.packbits(array != 0, axis=1))
        self._neg = _frozen(np.packbits(array < 0, axis=1))

    @classmethod
    def _from_planes(cls, nz, neg, rows, cols):
        obj = cls.__new__(cls)
        obj.rows, obj.cols = rows, cols
        obj._nz = _frozen(nz)
        obj._neg = _frozen(neg)
        return obj

    @cached_property
    def entries(self):
        nz = np.unpackbits(self._nz, axis=1, count=self.cols).astype(np.int8)
        neg = np.unpackbits(self._neg, axis=1, count=self.cols).astype(np.int8)
        return _frozen(nz * (1 - 2 * neg))

    @cached_property
    def _transposed_planes(self):
        nz = np.unpackbits(self._nz, axis=1, count=self.cols).T
        neg = np.unpackbits(self._neg, axis=1, count=self.cols).T
        return np.packbits(nz, axis=1), np.packbits(neg, axis=1)

    def transpose(self):
        nz, neg = self._transposed_planes
        return type(self)._from_planes(nz, neg, self.cols, self.rows)

    def __eq__(self, other):
        if isinstance(other, _PackedMatrix):
            return (
                self.shape == other.shape
                and np.array_equal(self._nz, other._nz)
                and np.array_equal(self._neg, other._neg)
            )
        return super().__eq__(other)

    __hash__ = None


class SignMatrix(_PackedMatrix):
    family = "sign"
    alphabet = frozenset({-1, 0, 1})


class BinMatrix(_PackedMatrix):
    family = "bin"
    alphabet = frozenset({0, 1})


def _checked_int_array(array):
    """Convert to int64, raising instead of wrapping."""
    array = np.asarray(array)
    if array.dtype == object:
        flat = array.ravel().tolist()
        if any(not isinstance(v, (int, np.integer)) for v in flat):
            raise EntryError("IntMatrix entries must be integers")
        if flat and max(abs(int(v)) for v in flat) > INT64_MAX:
            raise MatrixOverflowError("Integer entry outside the int64 range")
        return array.astype(np.int64)
    if np.issubdtype(array.dtype, np.floating):
        raise EntryError("IntMatrix entries must be integers, not floats")
    return array.astype(np.int64)


class IntMatrix(_Dense):
    family = "int"

    def __init__(self, entries):
        array = _checked_int_array(entries)
        _check_shape(array)
        self.rows, self.cols = array.shape
        self.entries = _frozen(array)

    def max_abs(self):
        return int(np.abs(self.entries).max())


class RatMatrix(_Dense):
    family = "rat"

    def __init__(self, entries):
        array = np.asarray(entries, dtype=object)
        _check_shape(array)
        self.rows, self.cols = array.shape
        self.entries = _frozen(_as_fractions(array).astype(object))


def identity(size, family="bin"):
    eye = np.eye(size, dtype=np.int64)
    return _wrap(family, eye)


def ones(rows, cols=None, family="bin"):
    return _wrap(family, np.ones((rows, cols or rows), dtype=np.int64))


def _wrap(family, array):
    return {"sign": SignMatrix, "bin": BinMatrix, "int": IntMatrix, "rat": RatMatrix}[family](array)


def _result_family(a, b):
    families = {a.family, b.family}
    if "rat" in families:
        return "rat"
    if "int" in families:
        return "int"
    if families == {"bin"}:
        return "bin"
    return "sign"


def _bound(matrix):
    if isinstance(matrix, _PackedMatrix):
        return 1
    if isinstance(matrix, IntMatrix):
        return matrix.max_abs()
    return None


def _combine(a, b, op):
    if not isinstance(b, _Dense):
        return NotImplemented
    if a.shape != b.shape:
        raise DimensionError(f"Shape mismatch {a.shape} vs {b.shape}")
    if "rat" in (a.family, b.family):
        return RatMatrix(op(_as_fractions(a.entries.astype(object)), _as_fractions(b.entries.astype(object))))
    return IntMatrix(_checked_int_array(op(a.entries.astype(object), b.entries.astype(object))))


def _packed_product(a, b):
    """
    Exact product of two packed matrices.

    For entries in {-1, 0, 1}: a term is nonzero iff both nonzero bits are set,
    and negative iff exactly one sign bit is set, so each entry equals
    popcount(nz) - 2 * popcount(nz & (neg_a ^ neg_b)).
    """
    bt_nz, bt_neg = b._transposed_planes
    words = a._nz.shape[1]
    out = np.empty((a.rows, b.cols), dtype=np.int64)
    per_row = max(1, b.cols * words)
    chunk = max(1, setting("verification", "row_chunk_bytes") // per_row)
    for r0 in range(0, a.rows, chunk):
        r1 = min(a.rows, r0 + chunk)
        both = a._nz[r0:r1, None, :] & bt_nz[None, :, :]
        flips = both & (a._neg[r0:r1, None, :] ^ bt_neg[None, :, :])
        total = np.bitwise_count(both).sum(axis=2, dtype=np.int64)
        negative = np.bitwise_count(flips).sum(axis=2, dtype=np.int64)
        out[r0:r1] = total - 2 * negative
    return out


def mat_mul(a, b, method="auto"):
    """
    Exact product a·b.

    Packed operands use the bit-plane kernel unless method="dense"; integer
    operands use int64 matmul after an overflow bound check; any rational
    operand gives a RatMatrix.
    """
    if a.cols != b.rows:
        raise DimensionError(f"Inner dimensions differ: {a.shape} · {b.shape}")
    if "rat" in (a.family, b.family):
        left = _as_fractions(a.entries.astype(object))
        right = _as_fractions(b.entries.astype(object))
        return RatMatrix(np.dot(left, right))
    if method not in ("auto", "packed", "dense"):
        raise ValueError(f"Unknown method {method!r}")
    packed = isinstance(a, _PackedMatrix) and isinstance(b, _PackedMatrix)
    if packed and method != "dense":
        return IntMatrix(_packed_product(a, b))
    if method == "packed":
        raise DimensionError("Packed product needs sign or binary operands")
    bound = _bound(a) * _bound(b) * a.cols
    if bound > INT64_MAX:
        raise MatrixOverflowError(f"Product bound {bound} exceeds int64")
    return IntMatrix(np.matmul(a.entries.astype(np.int64), b.entries.astype(np.int64)))


def kronecker(a, b):
    family = _result_family(a, b)
    if family == "rat":
        left = _as_fractions(a.entries.astype(object))
        right = _as_fractions(b.entries.astype(object))
        return RatMatrix(np.kron(left, right))
    if family == "int":
        bound = _bound(a) * _bound(b)
        if bound > INT64_MAX:
            raise MatrixOverflowError(f"Kronecker bound {bound} exceeds int64")
    return _wrap(family, np.kron(a.entries.astype(np.int64), b.entries.astype(np.int64)))


def entrywise_mul(a, b):
    """Schur (entrywise) product."""
    if a.shape != b.shape:
        raise DimensionError(f"Shape mismatch {a.shape} vs {b.shape}")
    family = _result_family(a, b)
    if family == "rat":
        return RatMatrix(_as_fractions(a.entries.astype(object)) * _as_fractions(b.entries.astype(object)))
    if family == "int":
        bound = _bound(a) * _bound(b)
        if bound > INT64_MAX:
            raise MatrixOverflowError(f"Schur product bound {bound} exceeds int64")
    return _wrap(family, a.entries.astype(np.int64) * b.entries.astype(np.int64))


def block(a, block_rows, block_cols, i, j):
    return a.block(block_rows, block_cols, i, j)


def trace(a):
    return a.trace()


def transpose(a):
    return a.transpose()


def scalar_mul(a, scalar):
    return a.scalar_mul(scalar)
