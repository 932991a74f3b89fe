"""Linearised angle conditions, their trivial solutions, and the rigidity certificate.

A deformation assigns a tangent vector to each kept normal; these are laid
out in blocks of five, block ``k`` belonging to the k-th kept wall.  For an
orthogonal pair (i, j) the condition (n_i', n_j) + (n_i, n_j') = 0 gives one
row of the Jacobian.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .exactla import NFMatrix, rank_nf
from .minkowski import lorentz_algebra_basis, mat_vec, mink_form
from .numfield import NFElem, ZERO
from .polytope import NormalSet, WallSelection

REPORT_SCHEMA = 1

DeformationVector = list[NFElem]


def _signed(v: Sequence[NFElem]) -> list[NFElem]:
    # gradient of (x, v) with respect to x
    return [-v[0], v[1], v[2], v[3], v[4]]


def build_jacobian(ns: NormalSet, sel: WallSelection, faces: Sequence[tuple[int, int]]) -> NFMatrix:
    pos = {w: k for k, w in enumerate(sel.kept)}
    ncols = 5 * len(sel.kept)
    rows = []
    for i, j in faces:
        if i not in pos or j not in pos:
            raise ValueError(f"face ({i}, {j}) involves a removed wall")
        if mink_form(ns[i], ns[j]):
            raise ValueError(f"walls {i} and {j} are not orthogonal")
        row = [ZERO] * ncols
        for a, b in ((i, j), (j, i)):
            base = 5 * pos[a]
            for c, x in enumerate(_signed(ns[b])):
                row[base + c] = x
        rows.append(row)
    col_labels = [(w, c) for w in sel.kept for c in range(5)]
    return NFMatrix(rows, ncols, row_labels=list(faces), col_labels=col_labels)


def conjugation_kernel_basis(ns: NormalSet, sel: WallSelection) -> list[DeformationVector]:
    """Infinitesimal conjugations: block k is X n_k for each Lorentz generator X."""
    out = []
    for _, x in lorentz_algebra_basis():
        vec: DeformationVector = []
        for w in sel.kept:
            vec.extend(mat_vec(x, ns[w]))
        out.append(vec)
    return out


def scaling_kernel_basis(ns: NormalSet, sel: WallSelection) -> list[DeformationVector]:
    """Rescaling one normal at a time."""
    m = len(sel.kept)
    out = []
    for k, w in enumerate(sel.kept):
        vec = [ZERO] * (5 * m)
        vec[5 * k : 5 * k + 5] = ns[w]
        out.append(vec)
    return out


def trivial_kernel_basis(ns: NormalSet, sel: WallSelection) -> list[DeformationVector]:
    return conjugation_kernel_basis(ns, sel) + scaling_kernel_basis(ns, sel)


def verify_kernel(j: NFMatrix, vectors: Sequence[Sequence[NFElem]]) -> bool:
    sparse = j.sparse_rows()
    for v in vectors:
        if len(v) != j.ncols:
            raise ValueError(f"vector length {len(v)} != {j.ncols} columns")
        for row in sparse:
            acc = ZERO
            for c, x in row.items():
                y = v[c]
                if y:
                    acc = acc + x * y
            if acc:
                return False
    return True


def basis_rank(vectors: Sequence[Sequence[NFElem]]) -> int:
    """Rank over Q(alpha) of the stacked vectors."""
    return rank_nf(list(vectors))


@dataclass
class RigidityReport:
    dims: tuple[int, int]
    trivial_kernel_dim: int
    ranks_mod_p: dict[int, int]
    certified_rank: int
    kernel_dim: int | None
    verdict: str
    kernel_verified: bool = True
    rank_lower_bound_source: str = ""
    extra: dict = field(default_factory=dict)
    timings_ms: dict[str, float] = field(default_factory=dict)

    @property
    def rigid(self) -> bool:
        return self.verdict == "Rigid"

    def to_json_dict(self) -> dict:
        d = asdict(self)
        out = {"schema": REPORT_SCHEMA}
        out["dims"] = list(self.dims)
        out["trivial_kernel_dim"] = self.trivial_kernel_dim
        out["ranks_mod_p"] = {str(p): r for p, r in self.ranks_mod_p.items()}
        out["certified_rank"] = self.certified_rank
        out["kernel_dim"] = self.kernel_dim
        out["verdict"] = self.verdict
        out["kernel_verified"] = self.kernel_verified
        out["rank_lower_bound_source"] = self.rank_lower_bound_source
        out["extra"] = d["extra"]
        out["timings_ms"] = {k: round(v, 3) for k, v in self.timings_ms.items()}
        return out


def certify_rigidity(
    j: NFMatrix,
    trivial_basis: Sequence[Sequence[NFElem]],
    rank_lower_bound: int,
    source: Sequence[int] | dict[int, int] | str = (),
    *,
    check_kernel: bool = True,
) -> RigidityReport:
    """Sandwich the kernel between an explicit basis and a rank lower bound.

    ``source`` records where the bound came from: a mapping prime -> modular
    rank of the restricted integer matrix, a list of primes, or a label.
    Verdict is ``Rigid`` exactly when the two bounds meet at the column count.
    """
    timings = {}
    t0 = time.perf_counter()
    verified = verify_kernel(j, trivial_basis) if check_kernel else True
    timings["verify_kernel"] = (time.perf_counter() - t0) * 1e3
    t0 = time.perf_counter()
    kdim = basis_rank(trivial_basis) if verified else 0
    timings["basis_rank"] = (time.perf_counter() - t0) * 1e3
    total = kdim + rank_lower_bound
    if verified and total > j.ncols:
        raise ValueError(
            f"kernel lower bound {kdim} plus rank lower bound {rank_lower_bound} exceeds {j.ncols} columns"
        )
    rigid = verified and total == j.ncols
    if isinstance(source, dict):
        ranks = dict(source)
        label = "modular"
    elif isinstance(source, str):
        ranks = {}
        label = source
    else:
        ranks = {}
        label = "primes " + ",".join(str(p) for p in source) if source else ""
    return RigidityReport(
        dims=(j.nrows, j.ncols),
        trivial_kernel_dim=kdim,
        ranks_mod_p=ranks,
        certified_rank=rank_lower_bound,
        kernel_dim=kdim if rigid else None,
        verdict="Rigid" if rigid else "Inconclusive",
        kernel_verified=verified,
        rank_lower_bound_source=label,
        timings_ms=timings,
    )
