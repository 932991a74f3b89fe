"""Restriction of scalars Q(alpha) -> Q -> Z -> F_p and three exact rank routines.

* :func:`rank_fp`      dense Gaussian elimination over F_p (numpy, int64)
* :func:`rank_bareiss` fraction-free elimination over Z
* :func:`rank_nf`      Gaussian elimination directly over Q(alpha)

Matrices are stored densely.  The two exact eliminations work on row
dictionaries internally and pick pivots by the Markowitz count, which keeps
fill-in (and, for Bareiss, entry growth) small on the Jacobians met here.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .numfield import NFElem, ZERO, nf_regular_rep

__all__ = [
    "NFMatrix",
    "QMatrix",
    "ZMatrix",
    "FpMatrix",
    "BareissResult",
    "is_prime",
    "restrict_scalars",
    "clear_denominators",
    "reduce_mod",
    "rank_fp",
    "rank_bareiss",
    "bareiss",
    "rank_nf",
    "nf_elimination",
    "restrict_vector",
    "prime_search_order",
    "row_lcms",
]

MAX_PRIME = 1 << 31


class _Dense:
    ring = "?"
    rows: list

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return self._ncols  # type: ignore[attr-defined]

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def sparse_rows(self) -> list[dict[int, Any]]:
        return [{c: v for c, v in enumerate(row) if v} for row in self.rows]

    def row_nnz(self) -> list[int]:
        return [sum(1 for v in row if v) for row in self.rows]


@dataclass(eq=False)
class NFMatrix(_Dense):
    """Dense matrix over Q(alpha), optionally labelled."""

    rows: list[list[NFElem]]
    _ncols: int = -1
    row_labels: list | None = None
    col_labels: list | None = None
    ring = "NF"

    def __post_init__(self):
        if self._ncols < 0:
            self._ncols = len(self.rows[0]) if self.rows else 0
        self.rows = [[x if isinstance(x, NFElem) else NFElem(x) for x in row] for row in self.rows]
        _check_width(self.rows, self._ncols)

    @classmethod
    def zeros(cls, m: int, n: int) -> NFMatrix:
        return cls([[ZERO] * n for _ in range(m)], n)

    @classmethod
    def identity(cls, n: int) -> NFMatrix:
        one = NFElem(1)
        return cls([[one if i == j else ZERO for j in range(n)] for i in range(n)], n)

    def matvec(self, v: Sequence[NFElem]) -> list[NFElem]:
        if len(v) != self.ncols:
            raise ValueError(f"vector length {len(v)} != {self.ncols} columns")
        out = []
        for row in self.rows:
            acc = ZERO
            for x, y in zip(row, v):
                if x and y:
                    acc = acc + x * y
            out.append(acc)
        return out


@dataclass(eq=False)
class QMatrix(_Dense):
    rows: list[list[Fraction]]
    _ncols: int = -1
    ring = "Q"

    def __post_init__(self):
        if self._ncols < 0:
            self._ncols = len(self.rows[0]) if self.rows else 0
        _check_width(self.rows, self._ncols)


@dataclass(eq=False)
class ZMatrix(_Dense):
    rows: list[list[int]]
    _ncols: int = -1
    ring = "Z"

    def __post_init__(self):
        if self._ncols < 0:
            self._ncols = len(self.rows[0]) if self.rows else 0
        _check_width(self.rows, self._ncols)

    @classmethod
    def from_array(cls, a) -> ZMatrix:
        a = np.asarray(a)
        return cls([[int(x) for x in row] for row in a], a.shape[1])


@dataclass(eq=False)
class FpMatrix:
    data: np.ndarray
    p: int

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.int64)
        if self.data.ndim != 2:
            raise ValueError("FpMatrix needs a 2-d array")

    @property
    def ring(self) -> str:
        return f"Fp:{self.p}"

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape  # type: ignore[return-value]

    @property
    def nrows(self) -> int:
        return self.data.shape[0]

    @property
    def ncols(self) -> int:
        return self.data.shape[1]

    @property
    def rows(self) -> list[list[int]]:
        return self.data.tolist()

    def __eq__(self, other):
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool((self.data == other.data).all())


def _check_width(rows, n):
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValueError(f"row {i} has {len(row)} entries, expected {n}")


# --- primes -----------------------------------------------------------------


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_search_order(seed: int = 0, n_increasing: int = 20, n_random: int = 10) -> list[int]:
    """113 first, then primes upward from 101, then seeded random 30-bit primes."""
    order = [113]
    q = 101
    while len(order) < 1 + n_increasing:
        if is_prime(q) and q not in order:
            order.append(q)
        q += 1
    rng = random.Random(seed)
    while len(order) < 1 + n_increasing + n_random:
        q = rng.randrange(1 << 29, 1 << 30) | 1
        if is_prime(q) and q not in order:
            order.append(q)
    return order


# --- restriction of scalars -----------------------------------------------


def restrict_scalars(a: NFMatrix) -> QMatrix:
    """Replace each entry by its 4x4 left-multiplication matrix."""
    zero = Fraction(0)
    cache: dict[NFElem, list[list[Fraction]]] = {}
    out: list[list[Fraction]] = []
    for row in a.rows:
        block_rows = [[zero] * (4 * a.ncols) for _ in range(4)]
        for c, x in enumerate(row):
            if not x:
                continue
            rep = cache.get(x)
            if rep is None:
                rep = cache[x] = nf_regular_rep(x)
            for r in range(4):
                block_rows[r][4 * c : 4 * c + 4] = rep[r]
        out.extend(block_rows)
    return QMatrix(out, 4 * a.ncols)


def restrict_vector(v: Sequence[NFElem]) -> list[Fraction]:
    """Concatenated basis coordinates of a vector over Q(alpha)."""
    out: list[Fraction] = []
    for x in v:
        out.extend(x.coords)
    return out


def clear_denominators(a: QMatrix) -> ZMatrix:
    """Scale each row by the lcm of its denominators."""
    out = []
    for row in a.rows:
        m = lcm(*(x.denominator for x in row)) if row else 1
        if m == 1:
            out.append([x.numerator for x in row])
        else:
            out.append([x.numerator * (m // x.denominator) for x in row])
    return ZMatrix(out, a.ncols)


def row_lcms(a: QMatrix) -> list[int]:
    return [lcm(*(x.denominator for x in row)) if row else 1 for row in a.rows]


def reduce_mod(a: ZMatrix, p: int) -> FpMatrix:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p >= MAX_PRIME:
        raise ValueError(f"prime {p} is not below 2^31")
    data = np.array([[x % p for x in row] for row in a.rows], dtype=np.int64).reshape(a.nrows, a.ncols)
    return FpMatrix(data, p)


# --- ranks ----------------------------------------------------------------


def rank_fp(a: FpMatrix) -> int:
    """Rank over F_p; pivot is the first nonzero row in each column."""
    p = a.p
    m, n = a.shape
    work = a.data % p
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(work[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            work[[r, piv]] = work[[piv, r]]
        inv = pow(int(work[r, c]), -1, p)
        work[r] = work[r] * inv % p
        below = r + 1 + np.flatnonzero(work[r + 1 :, c])
        if below.size:
            # both factors < 2^31, so products stay below 2^62
            work[below] = (work[below] - np.outer(work[below, c], work[r])) % p
        r += 1
    return r


@dataclass
class BareissResult:
    rank: int
    max_bits: int
    pivots: list[tuple[int, int]] = field(default_factory=list)


def _markowitz_pivot(rows, alive, col_count, weight: Callable[[Any], int]):
    best = None
    best_key = None
    for k in alive:
        r = rows[k]
        lr = len(r) - 1
        for c, v in r.items():
            key = (lr * (col_count(c) - 1), weight(v), k, c)
            if best_key is None or key < best_key:
                best_key, best = key, (k, c)
        if best_key is not None and best_key[0] == 0 and best_key[1] <= 1:
            break
    return best


def bareiss(a: ZMatrix | Sequence[Sequence[int]], *, check: bool = False) -> BareissResult:
    """Fraction-free elimination with Markowitz pivoting.

    Rows untouched by a pivot step are not rescaled eagerly: a row last
    updated at step s is stored as-is and its true Bareiss value at step k is
    ``stored * piv[k] // piv[s]``.  Every division is exact; ``check=True``
    asserts that.  ``max_bits`` is the largest entry bit-length produced.
    """
    dense = a.rows if isinstance(a, ZMatrix) else a
    rows: list[dict[int, int]] = [{c: int(v) for c, v in enumerate(r) if v} for r in dense]
    stamp = [0] * len(rows)
    piv = [1]
    cols: dict[int, set[int]] = {}
    for k, r in enumerate(rows):
        for c in r:
            cols.setdefault(c, set()).add(k)
    alive = {k for k, r in enumerate(rows) if r}
    max_bits = max((abs(v).bit_length() for r in rows for v in r.values()), default=0)
    pivots = []

    def div(x, y):
        q, rem = divmod(x, y)
        if rem:
            raise ArithmeticError("inexact Bareiss division")
        return q

    exact = div if check else (lambda x, y: x // y)

    while alive:
        k, c = _markowitz_pivot(rows, alive, lambda cc: len(cols[cc]), lambda v: abs(v).bit_length())
        step = len(piv)
        prev = piv[-1]
        prow = rows[k]
        s = piv[stamp[k]]
        if stamp[k] != step - 1:
            prow = {cc: exact(v * prev, s) for cc, v in prow.items()}
        pk = prow[c]
        alive.discard(k)
        for cc in prow:
            cols[cc].discard(k)
        for t in sorted(cols[c]):
            r = rows[t]
            s = piv[stamp[t]]
            scaled = r if s == prev else {cc: exact(v * prev, s) for cc, v in r.items()}
            atc = scaled[c]
            new = {}
            for cc, v in scaled.items():
                w = prow.get(cc)
                nv = exact(pk * v - atc * w, prev) if w is not None else exact(pk * v, prev)
                if nv:
                    new[cc] = nv
            for cc, w in prow.items():
                if cc not in scaled:
                    new[cc] = exact(-atc * w, prev)
            for cc in r:
                if cc not in new:
                    cols[cc].discard(t)
            for cc, v in new.items():
                if cc not in r:
                    cols[cc].add(t)
                b = v.bit_length() if v > 0 else (-v).bit_length()
                if b > max_bits:
                    max_bits = b
            rows[t] = new
            stamp[t] = step
            if not new:
                alive.discard(t)
        rows[k] = {}
        piv.append(pk)
        pivots.append((k, c))
    return BareissResult(len(pivots), max_bits, pivots)


def rank_bareiss(a: ZMatrix) -> int:
    return bareiss(a).rank


@dataclass
class NFEliminationResult:
    rank: int
    pivots: list[tuple[int, int]]
    max_fill: int
    max_bits: int


def nf_elimination(rows_in: Iterable[Iterable[NFElem]] | NFMatrix) -> NFEliminationResult:
    """Gaussian elimination over Q(alpha) with exact inversion and Markowitz pivots."""
    src = rows_in.rows if isinstance(rows_in, NFMatrix) else rows_in
    rows: list[dict[int, NFElem]] = []
    for r in src:
        rows.append({c: v for c, v in enumerate(r) if v})
    cols: dict[int, set[int]] = {}
    for k, r in enumerate(rows):
        for c in r:
            cols.setdefault(c, set()).add(k)
    alive = {k for k, r in enumerate(rows) if r}
    pivots = []
    max_fill = sum(len(r) for r in rows)
    max_bits = 0

    def weight(v: NFElem) -> int:
        return v.denominator.bit_length() + max(abs(x) for x in v.numerators).bit_length()

    while alive:
        k, c = _markowitz_pivot(rows, alive, lambda cc: len(cols[cc]), weight)
        prow = rows[k]
        alive.discard(k)
        for cc in prow:
            cols[cc].discard(k)
        pinv = prow[c].inverse()
        for t in sorted(cols[c]):
            r = rows[t]
            f = r[c] * pinv
            for cc, v in prow.items():
                old = r.get(cc)
                nv = -(f * v) if old is None else old - f * v
                if nv:
                    if old is None:
                        cols[cc].add(t)
                    r[cc] = nv
                    b = weight(nv)
                    if b > max_bits:
                        max_bits = b
                elif old is not None:
                    del r[cc]
                    cols[cc].discard(t)
            if not r:
                alive.discard(t)
        rows[k] = {}
        pivots.append((k, c))
        fill = sum(len(rows[t]) for t in alive)
        if fill > max_fill:
            max_fill = fill
    return NFEliminationResult(len(pivots), pivots, max_fill, max_bits)


def rank_nf(a: NFMatrix | Sequence[Sequence[NFElem]]) -> int:
    return nf_elimination(a).rank
