"""
ASCII matrix and scheme files, and JSON reports with exact numbers.

Matrix file:
    SIGNMAT <rows> <cols>      then one line per row over '+', '-', '0'
    BINMAT <rows> <cols>       then one line per row over '0', '1'

Scheme file:
    SCHEME <d> <size>          then <size> lines of space-separated classes

Every line ends in '\\n'; nothing else is accepted. Rationals in reports are
"num/den" strings, so a report never holds a float.
"""

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .core_matrix import BinMatrix, SignMatrix, _Dense
from .errors import FormatError
from .scheme_core import RelationPartition

SIGN_CHARS = {1: "+", -1: "-", 0: "0"}
SIGN_VALUES = {c: v for v, c in SIGN_CHARS.items()}
BIN_VALUES = {"0": 0, "1": 1}


def _lines(text):
    if not isinstance(text, str):
        raise FormatError("Expected text")
    if not text.isascii():
        raise FormatError("File is not ASCII")
    if "\r" in text:
        raise FormatError("Carriage returns are not allowed; lines end in '\\n'")
    if not text.endswith("\n"):
        raise FormatError("File must end with a newline")
    return text[:-1].split("\n")


def _header(line, keyword, fields):
    parts = line.split(" ")
    if len(parts) != fields + 1 or parts[0] != keyword:
        raise FormatError(f"Bad header {line!r}; expected '{keyword}' and {fields} integers")
    try:
        values = [int(p) for p in parts[1:]]
    except ValueError as e:
        raise FormatError(f"Bad header {line!r}: {e}") from e
    if any(str(v) != p for v, p in zip(values, parts[1:])) or any(v < 0 for v in values):
        raise FormatError(f"Bad header {line!r}: sizes must be plain nonnegative integers")
    return values


def dumps_matrix(matrix):
    if isinstance(matrix, SignMatrix):
        keyword, chars = "SIGNMAT", SIGN_CHARS
    elif isinstance(matrix, BinMatrix):
        keyword, chars = "BINMAT", {0: "0", 1: "1"}
    else:
        raise FormatError(f"Only sign and binary matrices have a file format, not {type(matrix).__name__}")
    rows = ["".join(chars[int(v)] for v in row) for row in matrix.entries]
    return "\n".join([f"{keyword} {matrix.rows} {matrix.cols}", *rows]) + "\n"


def loads_matrix(text):
    lines = _lines(text)
    keyword = lines[0].split(" ")[0]
    if keyword == "SIGNMAT":
        values, cls = SIGN_VALUES, SignMatrix
    elif keyword == "BINMAT":
        values, cls = BIN_VALUES, BinMatrix
    else:
        raise FormatError(f"Unknown matrix header {lines[0]!r}")
    rows, cols = _header(lines[0], keyword, 2)
    body = lines[1:]
    if len(body) != rows:
        raise FormatError(f"Header promises {rows} rows, found {len(body)}")
    entries = np.empty((rows, cols), dtype=np.int8)
    for r, line in enumerate(body):
        if len(line) != cols:
            raise FormatError(f"Row {r} has {len(line)} characters, expected {cols}")
        try:
            entries[r] = [values[c] for c in line]
        except KeyError as e:
            raise FormatError(f"Row {r} has an invalid character {e.args[0]!r}") from e
    return cls(entries)


def dumps_scheme(rels):
    rows = [" ".join(str(int(v)) for v in row) for row in rels.relmap]
    return "\n".join([f"SCHEME {rels.d} {rels.size}", *rows]) + "\n"


def loads_scheme(text):
    lines = _lines(text)
    d, size = _header(lines[0], "SCHEME", 2)
    if size < 1:
        raise FormatError(f"A scheme needs at least one point, header says {size}")
    body = lines[1:]
    if len(body) != size:
        raise FormatError(f"Header promises {size} rows, found {len(body)}")
    relmap = np.empty((size, size), dtype=np.int64)
    for r, line in enumerate(body):
        cells = line.split(" ")
        if len(cells) != size or not all(c.isdigit() and str(int(c)) == c for c in cells):
            raise FormatError(f"Row {r} must hold {size} plain class indices separated by single spaces")
        relmap[r] = [int(c) for c in cells]
    if relmap.max() > d:
        raise FormatError(f"Class index {int(relmap.max())} exceeds d = {d}")
    return RelationPartition(relmap, d)


def _read(path):
    try:
        return Path(path).read_bytes().decode("ascii")
    except UnicodeDecodeError as e:
        raise FormatError(f"{path} is not ASCII") from e


def _write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(text.encode("ascii"))
    return path


def save_matrix(matrix, path):
    return _write(path, dumps_matrix(matrix))


def load_matrix(path):
    return loads_matrix(_read(path))


def save_scheme(rels, path):
    return _write(path, dumps_scheme(rels))


def load_scheme(path):
    return loads_scheme(_read(path))


def exact(value):
    """JSON-ready copy with Fractions as "num/den" strings; floats are refused."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        raise FormatError(f"Refusing to serialize inexact value {value!r}")
    if value is None or isinstance(value, str):
        return value
    if isinstance(value, _Dense):
        return exact(value.entries)
    if isinstance(value, np.ndarray):
        return [exact(v) for v in value.tolist()] if value.ndim else exact(value.item())
    if isinstance(value, dict):
        return {str(k): exact(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [exact(v) for v in items]
    raise FormatError(f"Cannot serialize {type(value).__name__}")


def write_report(report, path):
    return _write(path, json.dumps(exact(report), indent=2) + "\n")


def read_report(path):
    with open(path, "r", encoding="ascii") as f:
        return json.load(f)
