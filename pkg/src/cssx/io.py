"""Matrix Market and CSV readers producing dense float64 arrays."""

import csv
import math
from pathlib import Path

import numpy as np

from .exceptions import NonFiniteError, ParseError


def _parse_float(token, line, column):
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"cannot parse {token!r} as a number", line, column) from None
    if not math.isfinite(value):
        raise NonFiniteError(f"line {line}, column {column}: non-finite entry {token!r}")
    return value


def _parse_int(token, line, column):
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", line, column) from None


def read_matrix_market(path):
    """Read ``array`` or ``coordinate`` real/integer general Matrix Market files.

    Coordinate entries are 1-based and duplicates are summed.
    """
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    banner = lines[0].split()
    if len(banner) != 5 or banner[0].lower() != "%%matrixmarket" or banner[1].lower() != "matrix":
        raise ParseError("missing '%%MatrixMarket matrix' banner", 1, 1)
    layout, field, symmetry = (b.lower() for b in banner[2:])
    if layout not in ("array", "coordinate"):
        raise ParseError(f"unsupported layout {layout!r}", 1, 3)
    if field not in ("real", "integer", "double"):
        raise ParseError(f"unsupported field {field!r}", 1, 4)
    if symmetry != "general":
        raise ParseError(f"unsupported symmetry {symmetry!r}", 1, 5)

    body = [
        (no, text.split())
        for no, text in enumerate(lines[1:], start=2)
        if text.strip() and not text.lstrip().startswith("%")
    ]
    if not body:
        raise ParseError("missing size line", len(lines))
    size_no, size = body[0]
    want = 2 if layout == "array" else 3
    if len(size) != want:
        raise ParseError(f"size line needs {want} integers", size_no)
    dims = [_parse_int(tok, size_no, col) for col, tok in enumerate(size, start=1)]
    rows, cols = dims[0], dims[1]
    if rows < 1 or cols < 1:
        raise ParseError("matrix dimensions must be positive", size_no)
    entries = body[1:]

    if layout == "array":
        if len(entries) != rows * cols:
            raise ParseError(f"expected {rows * cols} entries, found {len(entries)}", size_no)
        values = []
        for no, toks in entries:
            if len(toks) != 1:
                raise ParseError("array entries hold one value per line", no, 2)
            values.append(_parse_float(toks[0], no, 1))
        return np.array(values, dtype=np.float64).reshape((rows, cols), order="F")

    nnz = dims[2]
    if len(entries) != nnz:
        raise ParseError(f"expected {nnz} entries, found {len(entries)}", size_no)
    dense = np.zeros((rows, cols))
    for no, toks in entries:
        if len(toks) != 3:
            raise ParseError("coordinate entries need 'row col value'", no)
        i = _parse_int(toks[0], no, 1)
        j = _parse_int(toks[1], no, 2)
        if not (1 <= i <= rows):
            raise ParseError(f"row index {i} out of range 1..{rows}", no, 1)
        if not (1 <= j <= cols):
            raise ParseError(f"column index {j} out of range 1..{cols}", no, 2)
        dense[i - 1, j - 1] += _parse_float(toks[2], no, 3)
    return dense


def read_csv(path):
    """Headerless CSV, one matrix row per line."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for no, record in enumerate(csv.reader(fh), start=1):
            if not record or all(not f.strip() for f in record):
                continue
            rows.append([_parse_float(f.strip(), no, col) for col, f in enumerate(record, start=1)])
            if len(rows[-1]) != len(rows[0]):
                raise ParseError(
                    f"expected {len(rows[0])} fields, found {len(rows[-1])}", no, len(rows[-1])
                )
    if not rows:
        raise ParseError("no data rows", 1)
    return np.array(rows, dtype=np.float64)


FORMATS = {"mm": read_matrix_market, "matrix_market": read_matrix_market, "csv": read_csv}


def read_matrix(path, format=None):
    """Load a dense matrix; ``format`` is ``"mm"`` or ``"csv"`` (inferred from suffix if None)."""
    path = Path(path)
    if format is None:
        format = "mm" if path.suffix.lower() in (".mtx", ".mm") else "csv"
    try:
        reader = FORMATS[format]
    except KeyError:
        raise ValueError(f"unknown matrix format {format!r}") from None
    return reader(path)


def write_matrix_market(path, a):
    """Write ``a`` as an ``array real general`` Matrix Market file."""
    a = np.asarray(a, dtype=np.float64)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("%%MatrixMarket matrix array real general\n")
        fh.write(f"{a.shape[0]} {a.shape[1]}\n")
        for value in a.ravel(order="F"):
            fh.write(f"{float(value)!r}\n")
