"""Exact arithmetic in the quartic field Q(alpha), alpha = sqrt(1 + sqrt(5)).

Elements are written in the power basis {1, alpha, alpha^2, alpha^3} and
reduced with the minimal polynomial t^4 - 2 t^2 - 4.  Internally an element
is four integer numerators over one positive common denominator, kept in
lowest terms; :attr:`NFElem.coords` exposes the four rational coordinates.

The real embedding used for signs and intervals sends alpha to the positive
real root of t^4 - 2 t^2 - 4 (about 1.7989).  Zero tests are always exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

__all__ = [
    "NFElem",
    "ZERO",
    "ONE",
    "ALPHA",
    "TAU",
    "TAU_INV",
    "SQRT5",
    "MINPOLY",
    "nf_mul",
    "nf_inv",
    "nf_sign",
    "nf_regular_rep",
    "nf_to_real",
    "alpha_interval",
    "format_nf",
    "parse_nf",
    "parse_rational",
]

# t^4 - 2 t^2 - 4, lowest degree first
MINPOLY = (-4, 0, -2, 0, 1)


def _normalize(a0: int, a1: int, a2: int, a3: int, d: int) -> tuple[tuple[int, int, int, int], int]:
    if d < 0:
        a0, a1, a2, a3, d = -a0, -a1, -a2, -a3, -d
    g = gcd(gcd(a0, a1), gcd(gcd(a2, a3), d))
    if g > 1:
        return (a0 // g, a1 // g, a2 // g, a3 // g), d // g
    return (a0, a1, a2, a3), d


class NFElem:
    """An element c0 + c1*alpha + c2*alpha^2 + c3*alpha^3 of Q(alpha)."""

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, c0=0, c1=0, c2=0, c3=0):
        fr = [Fraction(c) for c in (c0, c1, c2, c3)]
        d = lcm(*(f.denominator for f in fr))
        self._num, self._den = _normalize(*(f.numerator * (d // f.denominator) for f in fr), d)
        self._hash = None

    @classmethod
    def _raw(cls, num: tuple[int, int, int, int], den: int) -> NFElem:
        obj = object.__new__(cls)
        obj._num, obj._den = _normalize(*num, den)
        obj._hash = None
        return obj

    @classmethod
    def from_coords(cls, coords: Iterable) -> NFElem:
        c = list(coords)
        if len(c) != 4:
            raise ValueError(f"expected 4 coordinates, got {len(c)}")
        return cls(*c)

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        d = self._den
        return tuple(Fraction(a, d) for a in self._num)  # type: ignore[return-value]

    @property
    def numerators(self) -> tuple[int, int, int, int]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not (self._num[1] or self._num[2] or self._num[3])

    # --- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, NFElem):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        a, da = self._num, self._den
        b, db = other._num, other._den
        if da == db:
            return NFElem._raw((a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]), da)
        return NFElem._raw(
            (a[0] * db + b[0] * da, a[1] * db + b[1] * da, a[2] * db + b[2] * da, a[3] * db + b[3] * da),
            da * db,
        )

    __radd__ = __add__

    def __neg__(self):
        a = self._num
        obj = object.__new__(NFElem)
        obj._num, obj._den, obj._hash = (-a[0], -a[1], -a[2], -a[3]), self._den, None
        return obj

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, NFElem):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if not isinstance(other, NFElem):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return NFElem._raw(_mul_num(self._num, other._num), self._den * other._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, NFElem):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> NFElem:
        """Multiplicative inverse; raises ZeroDivisionError on zero."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(alpha)")
        a0, a1, a2, a3 = self._num
        # x = A + B*alpha with A = a0 + a2*y, B = a1 + a3*y, y = alpha^2 = 1 + sqrt5.
        # x * (A - B*alpha) = A^2 - y*B^2 =: u + v*y, whose norm down to Q is
        # u^2 + 2uv - 4v^2 (y satisfies y^2 = 2y + 4).
        # A^2 = a0^2 + 2 a0 a2 y + a2^2 y^2 ; y^2 = 2y + 4
        A2_u = a0 * a0 + 4 * a2 * a2
        A2_v = 2 * a0 * a2 + 2 * a2 * a2
        B2_u = a1 * a1 + 4 * a3 * a3
        B2_v = 2 * a1 * a3 + 2 * a3 * a3
        # y * (B2_u + B2_v y) = B2_u y + B2_v (2y + 4)
        u = A2_u - 4 * B2_v
        v = A2_v - B2_u - 2 * B2_v
        norm = u * u + 2 * u * v - 4 * v * v
        # (u + v y)^-1 = ((u + 2v) - v y) / norm
        conj_sub = (u + 2 * v, 0, -v, 0)
        first = _mul_num((a0, -a1, a2, -a3), conj_sub)
        # numerators over self._den^4 cancel to overall factor self._den / norm
        d = self._den
        return NFElem._raw(tuple(c * d for c in first), norm)

    # --- comparison / hashing -------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, NFElem):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self._den == other._den and self._num == other._num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._num, self._den))
        return self._hash

    def __bool__(self):
        return any(self._num)

    def sign(self) -> int:
        return nf_sign(self)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        lo, hi = nf_to_real(self, 60)
        return float((lo + hi) / 2)

    def __repr__(self):
        return f"NFElem({format_nf(self)})"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}" + ("" if k == 0 else "*a" if k == 1 else f"*a^{k}"))
        return " + ".join(terms) if terms else "0"


def _mul_num(a: Sequence[int], b: Sequence[int]) -> tuple[int, int, int, int]:
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    c0 = a0 * b0
    c1 = a0 * b1 + a1 * b0
    c2 = a0 * b2 + a1 * b1 + a2 * b0
    c3 = a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0
    c4 = a1 * b3 + a2 * b2 + a3 * b1
    c5 = a2 * b3 + a3 * b2
    c6 = a3 * b3
    # alpha^4 = 2 alpha^2 + 4, alpha^5 = 2 alpha^3 + 4 alpha, alpha^6 = 8 alpha^2 + 8
    return (c0 + 4 * c4 + 8 * c6, c1 + 4 * c5, c2 + 2 * c4 + 8 * c6, c3 + 2 * c5)


def _coerce(x) -> NFElem | None:
    if isinstance(x, NFElem):
        return x
    if isinstance(x, (int, Fraction)):
        return NFElem(x)
    return None


ZERO = NFElem(0)
ONE = NFElem(1)
ALPHA = NFElem(0, 1)
TAU = NFElem(0, 0, Fraction(1, 2))  # golden ratio = alpha^2 / 2
TAU_INV = NFElem(-1, 0, Fraction(1, 2))
SQRT5 = NFElem(-1, 0, 1)


def nf_mul(x: NFElem, y: NFElem) -> NFElem:
    return x * y


def nf_inv(x: NFElem) -> NFElem:
    return x.inverse()


def nf_regular_rep(x: NFElem) -> list[list[Fraction]]:
    """4x4 rational matrix of multiplication by ``x``.

    Column k holds the coordinates of x * alpha^k, so that
    ``rep(x) @ coords(y) == coords(x * y)``.
    """
    cols = []
    p = x
    for _ in range(4):
        cols.append(p.coords)
        p = p * ALPHA
    return [[cols[k][r] for k in range(4)] for r in range(4)]


# --- real embedding ---------------------------------------------------------

_alpha_cache: list[tuple[Fraction, Fraction]] = [(Fraction(1), Fraction(2))]


def _minpoly_at(t: Fraction) -> Fraction:
    t2 = t * t
    return t2 * t2 - 2 * t2 - 4


def alpha_interval(bits: int) -> tuple[Fraction, Fraction]:
    """Rational interval of width <= 2**-bits containing alpha (by bisection)."""
    target = Fraction(1, 1 << bits)
    lo, hi = _alpha_cache[-1]
    if hi - lo <= target:
        for lo, hi in _alpha_cache:
            if hi - lo <= target:
                return lo, hi
    while hi - lo > target:
        mid = (lo + hi) / 2
        # minpoly is increasing on (1, 2): negative left of alpha
        if _minpoly_at(mid) < 0:
            lo = mid
        else:
            hi = mid
        _alpha_cache.append((lo, hi))
    return lo, hi


def _eval_interval(x: NFElem, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    # 0 < lo <= alpha <= hi, so each power is monotone on the interval
    s_lo = s_hi = Fraction(0)
    plo = phi = Fraction(1)
    for c in x.coords:
        if c >= 0:
            s_lo += c * plo
            s_hi += c * phi
        else:
            s_lo += c * phi
            s_hi += c * plo
        plo *= lo
        phi *= hi
    return s_lo, s_hi


def nf_to_real(x: NFElem, bits: int = 53) -> tuple[Fraction, Fraction]:
    """Rational interval of width <= 2**-bits containing the real value of ``x``."""
    if bits < 1:
        raise ValueError("bits must be >= 1")
    if x.is_rational():
        v = x.coords[0]
        return v, v
    target = Fraction(1, 1 << bits)
    # width of the evaluated interval is at most K * width(alpha-interval)
    k = bits + max(1, sum(abs(c) for c in x.coords).__ceil__().bit_length()) + 4
    while True:
        lo, hi = _eval_interval(x, *alpha_interval(k))
        if hi - lo <= target:
            return lo, hi
        k += 8


def nf_sign(x: NFElem) -> int:
    """Exact sign of ``x`` in the real embedding alpha > 0."""
    if x.is_zero():
        return 0
    if x.is_rational():
        return 1 if x._num[0] > 0 else -1
    bits = 32
    while True:
        lo, hi = _eval_interval(x, *alpha_interval(bits))
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2


# --- text encoding ----------------------------------------------------------


def _format_q(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_nf(x: NFElem) -> str:
    """Encode as ``c0/d0,c1/d1,c2/d2,c3/d3`` in lowest terms."""
    return ",".join(_format_q(c) for c in x.coords)


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or a bare integer; rejects zero denominators."""
    s = text.strip()
    if "/" in s:
        n, d = s.split("/", 1)
        num, den = int(n), int(d)
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(num, den)
    return Fraction(int(s))


def parse_nf(text: str) -> NFElem:
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"expected 4 comma-separated rationals, got {text!r}")
    return NFElem(*(parse_rational(p) for p in parts))
