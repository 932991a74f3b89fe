"""Exact Lorentzian geometry on Minkowski 5-space.

Vectors are 5-tuples of :class:`NFElem` and matrices are 5-tuples of rows.
The form has signature (-, +, +, +, +).  Normals are never normalized; every
formula divides by the self-form inside the field.
"""

from __future__ import annotations

import enum
from itertools import combinations
from typing import Sequence

from .numfield import NFElem, ONE, ZERO, nf_sign

MVec5 = tuple[NFElem, NFElem, NFElem, NFElem, NFElem]
Mat5 = tuple[MVec5, MVec5, MVec5, MVec5, MVec5]

METRIC_DIAG = (-1, 1, 1, 1, 1)


class ContactType(enum.Enum):
    ORTHOGONAL = "orthogonal"
    INTERSECTING = "intersecting_non_orthogonal"
    TANGENT = "tangent"
    ULTRAPARALLEL = "ultraparallel"


def mvec(*coords) -> MVec5:
    if len(coords) == 1 and not isinstance(coords[0], (NFElem, int)):
        coords = tuple(coords[0])
    if len(coords) != 5:
        raise ValueError(f"Minkowski vectors have 5 coordinates, got {len(coords)}")
    return tuple(c if isinstance(c, NFElem) else NFElem(c) for c in coords)  # type: ignore[return-value]


def mink_form(u: Sequence[NFElem], v: Sequence[NFElem]) -> NFElem:
    """-u0 v0 + u1 v1 + u2 v2 + u3 v3 + u4 v4."""
    acc = -(u[0] * v[0])
    for i in range(1, 5):
        if u[i] and v[i]:
            acc = acc + u[i] * v[i]
    return acc


def is_spacelike(v: Sequence[NFElem]) -> bool:
    return nf_sign(mink_form(v, v)) > 0


def are_proportional(u: Sequence[NFElem], v: Sequence[NFElem]) -> bool:
    """True iff all 2x2 minors of the pair vanish (zero vectors count as proportional)."""
    return all(not (u[i] * v[j] - u[j] * v[i]) for i, j in combinations(range(5), 2))


def classify_pair(n1: Sequence[NFElem], n2: Sequence[NFElem]) -> ContactType:
    """Relative position of the hyperplanes orthogonal to two space-like normals."""
    s11 = mink_form(n1, n1)
    s22 = mink_form(n2, n2)
    if nf_sign(s11) <= 0 or nf_sign(s22) <= 0:
        raise ValueError("classify_pair needs space-like vectors")
    if are_proportional(n1, n2):
        raise ValueError("classify_pair needs non-proportional vectors")
    return classify_from_forms(mink_form(n1, n2), s11, s22)


def classify_from_forms(s12: NFElem, s11: NFElem, s22: NFElem) -> ContactType:
    """Classification from precomputed forms; inputs are assumed valid."""
    if not s12:
        return ContactType.ORTHOGONAL
    sgn = nf_sign(s12 * s12 - s11 * s22)
    if sgn < 0:
        return ContactType.INTERSECTING
    if sgn == 0:
        return ContactType.TANGENT
    return ContactType.ULTRAPARALLEL


def reflection_matrix(n: Sequence[NFElem]) -> Mat5:
    """Matrix of v -> v - 2 (v, n) / (n, n) * n."""
    nn = mink_form(n, n)
    if nf_sign(nn) <= 0:
        raise ValueError("reflection normal must be space-like")
    c = NFElem(-2) / nn
    mn = [n[j] if METRIC_DIAG[j] > 0 else -n[j] for j in range(5)]
    rows = []
    for i in range(5):
        ci = c * n[i]
        rows.append(tuple((ONE if i == j else ZERO) + ci * mn[j] for j in range(5)))
    return tuple(rows)  # type: ignore[return-value]


def identity5() -> Mat5:
    return tuple(tuple(ONE if i == j else ZERO for j in range(5)) for i in range(5))  # type: ignore[return-value]


def mat_vec(a: Sequence[Sequence[NFElem]], v: Sequence[NFElem]) -> MVec5:
    out = []
    for row in a:
        acc = ZERO
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return tuple(out)  # type: ignore[return-value]


def mat_mul(a: Sequence[Sequence[NFElem]], b: Sequence[Sequence[NFElem]]) -> Mat5:
    cols = list(zip(*b))
    return tuple(mat_vec(cols, row) for row in a)  # type: ignore[return-value]


def transpose(a: Sequence[Sequence[NFElem]]) -> Mat5:
    return tuple(zip(*a))  # type: ignore[return-value]


def is_lorentz(a: Sequence[Sequence[NFElem]]) -> bool:
    """Exact check of A^T M A == M for M = diag(-1, 1, 1, 1, 1)."""
    # (A^T M A)_ij is the Minkowski form of columns i and j
    cols = transpose(a)
    for i in range(5):
        for j in range(i, 5):
            want = METRIC_DIAG[i] if i == j else 0
            if mink_form(cols[i], cols[j]) != want:
                return False
    return True


def lorentz_algebra_basis() -> list[tuple[str, Mat5]]:
    """Ten generators X with X^T M + M X = 0: four boosts then six rotations."""
    basis = []
    for a in range(1, 5):
        m = [[ZERO] * 5 for _ in range(5)]
        m[0][a] = ONE
        m[a][0] = ONE
        basis.append((f"boost_0{a}", tuple(tuple(r) for r in m)))
    for a, b in combinations(range(1, 5), 2):
        m = [[ZERO] * 5 for _ in range(5)]
        m[a][b] = ONE
        m[b][a] = -ONE
        basis.append((f"rot_{a}{b}", tuple(tuple(r) for r in m)))
    return basis
