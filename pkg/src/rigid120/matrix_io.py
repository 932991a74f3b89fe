"""Text formats for matrices, normal sets and graphs.

Matrix files start with a header ``rows cols ring`` (ring is ``NF``, ``Q``,
``Z`` or ``Fp:<p>``) followed by one line per row of whitespace-separated
entries.  NF entries use the ``c0/d0,c1/d1,c2/d2,c3/d3`` encoding, Q entries
``p/q``, Z and Fp entries plain decimal integers.
"""

from __future__ import annotations

import io
from fractions import Fraction
from pathlib import Path
from typing import TextIO, Union

import numpy as np

from .exactla import FpMatrix, NFMatrix, QMatrix, ZMatrix, is_prime
from .numfield import format_nf, parse_nf, parse_rational
from .polytope import AdjacencyGraph, NormalSet

AnyMatrix = Union[NFMatrix, QMatrix, ZMatrix, FpMatrix]


class MatrixFormatError(ValueError):
    def __init__(self, msg: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {msg}")
        self.line = line
        self.column = column


def _format_entry(ring: str, x) -> str:
    if ring == "NF":
        return format_nf(x)
    if ring == "Q":
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"
    return str(int(x))


def write_matrix(a: AnyMatrix, dest: str | Path | TextIO) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="ascii") as fh:
            write_matrix(a, fh)
        return
    ring = a.ring
    dest.write(f"{a.nrows} {a.ncols} {ring}\n")
    for row in a.rows:
        dest.write(" ".join(_format_entry(ring, x) for x in row))
        dest.write("\n")


def dumps_matrix(a: AnyMatrix) -> str:
    buf = io.StringIO()
    write_matrix(a, buf)
    return buf.getvalue()


def _tokens(line: str):
    col = 0
    n = len(line)
    while col < n:
        while col < n and line[col].isspace():
            col += 1
        if col >= n:
            break
        start = col
        while col < n and not line[col].isspace():
            col += 1
        yield start + 1, line[start:col]


def read_matrix(src: str | Path | TextIO) -> AnyMatrix:
    if isinstance(src, (str, Path)):
        with open(src, encoding="ascii") as fh:
            return read_matrix(fh)
    lines = src.read().splitlines()
    if not lines:
        raise MatrixFormatError("missing header", 1, 1)
    head = list(_tokens(lines[0]))
    if len(head) != 3:
        raise MatrixFormatError("header must be 'rows cols ring'", 1, 1)
    try:
        m, n = int(head[0][1]), int(head[1][1])
    except ValueError:
        raise MatrixFormatError("row and column counts must be integers", 1, head[0][0]) from None
    if m < 0 or n < 0:
        raise MatrixFormatError("negative dimension", 1, head[0][0])
    ring = head[2][1]
    p = None
    if ring.startswith("Fp:"):
        try:
            p = int(ring[3:])
        except ValueError:
            raise MatrixFormatError(f"bad prime in ring {ring!r}", 1, head[2][0]) from None
        if not is_prime(p):
            raise MatrixFormatError(f"{p} is not prime", 1, head[2][0])
        parse = int
    elif ring == "NF":
        parse = parse_nf
    elif ring == "Q":
        parse = parse_rational
    elif ring == "Z":
        parse = int
    else:
        raise MatrixFormatError(f"unknown ring {ring!r}", 1, head[2][0])

    body = lines[1:]
    while body and not body[-1].strip():
        body.pop()
    if len(body) != m:
        where = len(body) + 2 if len(body) < m else m + 2
        raise MatrixFormatError(f"expected {m} rows, found {len(body)}", where, 1)
    rows = []
    for i, text in enumerate(body):
        lineno = i + 2
        toks = list(_tokens(text))
        if len(toks) != n:
            raise MatrixFormatError(f"expected {n} entries, found {len(toks)}", lineno, 1)
        row = []
        for col, tok in toks:
            try:
                v = parse(tok)
            except (ValueError, ZeroDivisionError) as exc:
                raise MatrixFormatError(f"bad entry {tok!r}: {exc}", lineno, col) from None
            if p is not None and not 0 <= v < p:
                raise MatrixFormatError(f"entry {v} outside [0, {p})", lineno, col)
            row.append(v)
        rows.append(row)
    if ring == "NF":
        return NFMatrix(rows, n)
    if ring == "Q":
        return QMatrix(rows, n)
    if ring == "Z":
        return ZMatrix(rows, n)
    return FpMatrix(np.array(rows, dtype=np.int64).reshape(m, n), p)


def loads_matrix(text: str) -> AnyMatrix:
    return read_matrix(io.StringIO(text))


def write_normals(ns: NormalSet, dest: TextIO) -> None:
    """One line per normal: index, family, five NF coordinates."""
    for i, (v, fam) in enumerate(zip(ns.vectors, ns.families)):
        dest.write(f"{i} {fam} " + " ".join(format_nf(x) for x in v) + "\n")


def write_edges(g: AdjacencyGraph, dest: TextIO) -> None:
    for i, j in g.edges():
        dest.write(f"{i} {j}\n")
