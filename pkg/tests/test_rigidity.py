import random

import pytest

from rigid120.exactla import NFMatrix, clear_denominators, rank_fp, rank_nf, reduce_mod, restrict_scalars
from rigid120.minkowski import mvec
from rigid120.numfield import NFElem, ZERO
from rigid120.polytope import NormalSet
from rigid120.rigidity import (
    basis_rank,
    build_jacobian,
    certify_rigidity,
    conjugation_kernel_basis,
    scaling_kernel_basis,
    trivial_kernel_basis,
    verify_kernel,
)


def test_jacobian_shape_and_sparsity(ref):
    j = ref.jacobian
    assert j.shape == (432, 480)
    assert set(j.row_nnz()) == {8}
    assert j.row_labels == ref.faces
    assert j.col_labels[:6] == [(24, c) for c in range(5)] + [(25, 0)]


def test_jacobian_row_entries(ref):
    ns, j = ref.normals, ref.jacobian
    pos = {w: k for k, w in enumerate(ref.selection.kept)}
    i, k = ref.faces[0]
    row = j.rows[0]
    nk = ns[k]
    assert row[5 * pos[i] : 5 * pos[i] + 5] == [-nk[0], nk[1], nk[2], nk[3], nk[4]]
    ni = ns[i]
    assert row[5 * pos[k] : 5 * pos[k] + 5] == [-ni[0], ni[1], ni[2], ni[3], ni[4]]


def test_jacobian_rejects_non_orthogonal(ref):
    i, j = ref.selection.kept[:2]
    assert (i, j) not in ref.faces
    with pytest.raises(ValueError):
        build_jacobian(ref.normals, ref.selection, [(i, j)])
    removed = ref.selection.removed[0]
    with pytest.raises(ValueError):
        build_jacobian(ref.normals, ref.selection, [(removed, ref.selection.kept[0])])


def test_scaling_vectors(ref):
    sc = scaling_kernel_basis(ref.normals, ref.selection)
    assert len(sc) == 96
    assert verify_kernel(ref.jacobian, sc)
    assert basis_rank(sc) == 96


def test_conjugation_vectors(ref):
    conj = conjugation_kernel_basis(ref.normals, ref.selection)
    assert len(conj) == 10
    assert verify_kernel(ref.jacobian, conj)
    assert basis_rank(conj) == 10


def test_trivial_kernel(ref):
    assert len(ref.trivial) == 106
    assert verify_kernel(ref.jacobian, ref.trivial)
    assert basis_rank(ref.trivial) == 106


def test_verify_kernel_examples(ref):
    n = ref.jacobian.ncols
    assert verify_kernel(ref.jacobian, [[ZERO] * n])
    e1 = [ZERO] * n
    e1[0] = NFElem(1)
    assert not verify_kernel(ref.jacobian, [e1])


def test_basis_rank_duplicates(ref):
    sc = scaling_kernel_basis(ref.normals, ref.selection)
    assert basis_rank(sc + sc[:10]) == 96


def test_row_applied_to_scaling_vector(ref):
    sc = scaling_kernel_basis(ref.normals, ref.selection)
    pos = {w: k for k, w in enumerate(ref.selection.kept)}
    i, _ = ref.faces[5]
    row = ref.jacobian.rows[5]
    v = sc[pos[i]]
    assert sum((a * b for a, b in zip(row, v) if a and b), ZERO) == 0


def test_certificate_rigid(ref):
    rep = certify_rigidity(ref.jacobian, ref.trivial, 374, {113: 1496})
    assert rep.verdict == "Rigid"
    assert rep.kernel_dim == 106 and rep.certified_rank == 374
    d = rep.to_json_dict()
    assert d["schema"] == 1
    assert set(d) >= {"dims", "trivial_kernel_dim", "ranks_mod_p", "certified_rank", "kernel_dim", "verdict", "timings_ms"}
    assert d["ranks_mod_p"] == {"113": 1496}


def test_certificate_weak_bound(ref):
    rep = certify_rigidity(ref.jacobian, ref.trivial, 373, [113])
    assert rep.verdict == "Inconclusive"
    assert rep.kernel_dim is None


def test_certificate_impossible_bound(ref):
    with pytest.raises(ValueError):
        certify_rigidity(ref.jacobian, ref.trivial, 375, [113])


def test_certificate_with_non_kernel_basis(ref):
    bogus = list(ref.trivial)
    e = [ZERO] * 480
    e[0] = NFElem(1)
    bogus[0] = e
    rep = certify_rigidity(ref.jacobian, bogus, 374, [113])
    assert not rep.kernel_verified
    assert rep.verdict == "Inconclusive"


def test_truncated_instance_is_inconclusive(ref):
    a, b = ref.selection.kept[:2]
    faces = [f for f in ref.faces if a in f or b in f]
    sub = build_jacobian(ref.normals, ref.selection, faces)
    assert sub.nrows == 18
    r = rank_nf(sub)
    # every row is independent: each face meets a fresh wall block
    z = clear_denominators(restrict_scalars(sub))
    assert rank_fp(reduce_mod(z, 113)) == 4 * r
    assert r == 18
    rep = certify_rigidity(sub, ref.trivial, r, "exact-nf")
    assert rep.verdict == "Inconclusive"
    assert 480 - 106 - r == 356


def test_row_scaling_invariance(ref):
    rng = random.Random(5)
    rows = []
    for row in ref.jacobian.rows:
        f = NFElem(rng.randint(1, 5), rng.randint(-3, 3), 0, rng.randint(-2, 2))
        rows.append([x * f for x in row])
    assert rank_nf(NFMatrix(rows, 480)) == 374


def test_sign_flip_invariance(ref):
    flipped = tuple(
        tuple(-x for x in v) if k % 3 == 0 else v for k, v in enumerate(ref.normals.vectors)
    )
    ns = NormalSet(flipped, ref.normals.families)
    j = build_jacobian(ns, ref.selection, ref.faces)
    assert rank_nf(j) == 374


def test_exact_rank_sandwich(ref):
    # rank_nf + trivial dim = columns, matching the modular bound
    assert rank_nf(ref.jacobian) + basis_rank(ref.trivial) == 480
    assert rank_fp(reduce_mod(ref.z, 113)) == 4 * 374


def test_tiny_instance_by_hand():
    # two orthogonal walls: one row, 10 columns, 9-dimensional kernel
    from rigid120.polytope import make_selection

    e3 = mvec(0, 0, 0, 1, 0)
    e4 = mvec(0, 0, 0, 0, 1)
    ns = NormalSet((e3, e4), ("F3", "F3"))
    sel = make_selection(2, [])
    j = build_jacobian(ns, sel, [(0, 1)])
    assert j.shape == (1, 10)
    assert j.rows[0][4] == 1 and j.rows[0][8] == 1
    triv = trivial_kernel_basis(ns, sel)
    assert verify_kernel(j, triv)
    assert basis_rank(triv) == 9
    rep = certify_rigidity(j, triv, rank_nf(j))
    assert rep.verdict == "Rigid" and rep.kernel_dim == 9
