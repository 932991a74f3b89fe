"""One test per acceptance criterion; each prints a single AC-n PASS/FAIL line."""

import random
import time
from fractions import Fraction as F

import pytest

from oracles import rank_by_minors
from rigid120 import pipeline as pl
from rigid120.exactla import (
    NFMatrix,
    bareiss,
    clear_denominators,
    nf_elimination,
    rank_bareiss,
    rank_fp,
    rank_nf,
    reduce_mod,
    restrict_scalars,
)
from rigid120.minkowski import ContactType, identity5, is_lorentz, mat_mul, mat_vec, mink_form, reflection_matrix
from rigid120.numfield import NFElem, ONE, ZERO, nf_regular_rep
from rigid120.polytope import (
    adjacency_graph,
    disjointness_certificate,
    generate_normals,
    kept_face_pairs,
    maximum_independent_set,
    select_removed,
)
from rigid120.rigidity import basis_rank, build_jacobian, certify_rigidity, trivial_kernel_basis, verify_kernel

NORM = NFElem(4, 0, -1, 0)  # 3 - sqrt5


def _check(acceptance, key, conditions, detail):
    ok = all(conditions.values())
    failed = [k for k, v in conditions.items() if not v]
    acceptance(key, ok, detail + (f" (failed: {', '.join(failed)})" if failed else ""))
    assert ok, failed


def test_ac1_normal_generation(acceptance):
    t0 = time.perf_counter()
    ns = generate_normals()
    secs = time.perf_counter() - t0
    sizes = [len(ns.indices(f)) for f in ("F1", "F2", "F3")]
    conditions = {
        "count": len(ns) == 120,
        "families": sizes == [8, 16, 96],
        "norms": all(mink_form(v, v) == NORM for v in ns.vectors),
        "runtime": secs < 1.0,
    }
    _check(acceptance, "AC-1", conditions, f"120 normals {sizes}, all self-forms 3-sqrt5, {secs:.3f} s")


def test_ac2_combinatorics(acceptance):
    t0 = time.perf_counter()
    ns = generate_normals()
    g = adjacency_graph(ns)
    sel = select_removed(ns)
    cert = disjointness_certificate(g, sel)
    faces = kept_face_pairs(g, sel)
    secs = time.perf_counter() - t0
    counts = g.contact_counts()
    conditions = {
        "12-regular": {g.degree(i) for i in range(120)} == {12},
        "720 edges": g.edge_count() == 720,
        "7140 pairs": len(g.contacts) == 7140,
        "only orthogonal/ultraparallel": counts[ContactType.ORTHOGONAL.value] == 720
        and counts[ContactType.ULTRAPARALLEL.value] == 6420,
        "zero tangent": counts[ContactType.TANGENT.value] == 0,
        "zero oblique": counts[ContactType.INTERSECTING.value] == 0,
        "independent": cert.removed_independent,
        "3 markers": set(cert.markers_per_kept.values()) == {3},
        "288 cross": cert.cross_edges == 288,
        "432 faces": len(faces) == 432,
        "runtime": secs < 10.0,
    }
    detail = (
        f"12-regular, 720 edges, contacts {counts}, 3 markers per kept wall, "
        f"{cert.cross_edges} cross edges, {len(faces)} faces, {secs:.2f} s"
    )
    _check(acceptance, "AC-2", conditions, detail)


def test_ac3_independence_number(acceptance, ref):
    t0 = time.perf_counter()
    mis = maximum_independent_set(ref.graph)
    secs = time.perf_counter() - t0
    g = ref.graph
    removed = set(ref.selection.removed)
    # C cannot be extended: every kept wall touches a removed one
    non_extendable = all(any(g.has_edge(k, r) for r in removed) for k in ref.selection.kept)
    independent = all(not g.has_edge(a, b) for a in mis for b in mis if a < b)
    conditions = {
        "size 24": len(mis) == 24,
        "witness independent": independent,
        "C non-extendable": non_extendable,
        "runtime": secs < 600,
    }
    _check(acceptance, "AC-3", conditions, f"independence number {len(mis)} by exact branch and bound, {secs:.2f} s")


def test_ac4_jacobian(acceptance):
    t0 = time.perf_counter()
    ns = generate_normals()
    g = adjacency_graph(ns)
    sel = select_removed(ns)
    jac = build_jacobian(ns, sel, kept_face_pairs(g, sel))
    trivial = trivial_kernel_basis(ns, sel)
    verified = verify_kernel(jac, trivial)
    kdim = basis_rank(trivial)
    secs = time.perf_counter() - t0
    conditions = {
        "432x480": jac.shape == (432, 480),
        "8 nonzeros per row": set(jac.row_nnz()) == {8},
        "106 vectors": len(trivial) == 106,
        "J v = 0": verified,
        "rank 106": kdim == 106,
        "runtime": secs < 30.0,
    }
    detail = f"{jac.nrows}x{jac.ncols}, 8 nonzeros per row, {len(trivial)} trivial vectors in kernel, rank {kdim}, {secs:.2f} s"
    _check(acceptance, "AC-4", conditions, detail)


def test_ac5_scalar_restriction(acceptance, ref):
    q = ref.q
    jac = ref.jacobian
    target = NFElem(0, 0, F(-1, 2), 0)  # (-1 - sqrt5) / 2
    want = [[0, 0, -2, 0], [0, 0, 0, -2], [F(-1, 2), 0, -1, 0], [0, F(-1, 2), 0, -1]]
    hits = [(i, j) for i, row in enumerate(jac.rows) for j, x in enumerate(row) if x == target]
    blocks_ok = bool(hits) and all(
        [[q.rows[4 * i + a][4 * j + b] for b in range(4)] for a in range(4)] == want for i, j in hits
    )
    conditions = {
        "1728x1920": q.shape == (1728, 1920),
        "entry present": bool(hits),
        "block bit-exact": blocks_ok and nf_regular_rep(target) == want,
    }
    _check(acceptance, "AC-5", conditions, f"{q.nrows}x{q.ncols}, {len(hits)} blocks for (-1-sqrt5)/2 match the 4x4 reference")


def test_ac6_modular_rank(acceptance, ref):
    t0 = time.perf_counter()
    z = clear_denominators(restrict_scalars(ref.jacobian))
    r = rank_fp(reduce_mod(z, 113))
    secs = time.perf_counter() - t0
    conditions = {"rank 1496": r == 1496, "runtime": secs < 60.0}
    _check(acceptance, "AC-6", conditions, f"rank of A_Z mod 113 = {r}, {secs:.2f} s including restriction")


def test_ac7_certificate(acceptance, ref):
    r = rank_fp(reduce_mod(ref.z, 113))
    report = certify_rigidity(ref.jacobian, ref.trivial, -(-r // 4), {113: r})
    conditions = {
        "Rigid": report.verdict == "Rigid",
        "rank 374": report.certified_rank == 374,
        "kernel 106": report.kernel_dim == 106 and report.trivial_kernel_dim == 106,
        "sum": report.trivial_kernel_dim + report.certified_rank == 480,
    }
    detail = f"{report.trivial_kernel_dim} + {r}/4 = {report.trivial_kernel_dim + report.certified_rank}: {report.verdict}, rank {report.certified_rank}, kernel {report.kernel_dim}"
    _check(acceptance, "AC-7", conditions, detail)


@pytest.mark.slow
def test_ac8_cross_strategy(acceptance, ref):
    t0 = time.perf_counter()
    nf = nf_elimination(ref.jacobian)
    t_nf = time.perf_counter() - t0
    t0 = time.perf_counter()
    bz = bareiss(ref.z)
    t_b = time.perf_counter() - t0
    conditions = {"rank_nf 374": nf.rank == 374, "bareiss 1496": bz.rank == 1496}
    detail = (
        f"rank_nf = {nf.rank} ({t_nf:.1f} s), rank_bareiss = {bz.rank} "
        f"({t_b:.1f} s, max entry {bz.max_bits} bits)"
    )
    _check(acceptance, "AC-8", conditions, detail)


def _rand_elem(rng):
    return NFElem(*(F(rng.randint(-20, 20), rng.randint(1, 12)) for _ in range(4)))


def _rand_sparse(rng):
    if rng.random() < 0.3:
        return ZERO
    return NFElem(*(F(rng.randint(-3, 3), rng.choice((1, 2))) for _ in range(4)))


def _mat4_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)] for i in range(4)]


def _low_rank(rng, m, n, r):
    left = [[_rand_sparse(rng) for _ in range(r)] for _ in range(m)]
    right = [[_rand_sparse(rng) for _ in range(n)] for _ in range(r)]
    rows = []
    for i in range(m):
        row = []
        for j in range(n):
            acc = ZERO
            for k in range(r):
                acc = acc + left[i][k] * right[k][j]
            row.append(acc)
        rows.append(row)
    return NFMatrix(rows, n)


def test_ac9_property_suites(acceptance, ref):
    rng = random.Random(2024)
    axioms = 0
    for _ in range(1000):
        x, y, z = _rand_elem(rng), _rand_elem(rng), _rand_elem(rng)
        ok = (
            (x * y) * z == x * (y * z)
            and x * (y + z) == x * y + x * z
            and x * y == y * x
            and (not x or x * x.inverse() == ONE)
        )
        axioms += ok
    homs = 0
    for _ in range(500):
        x, y = _rand_elem(rng), _rand_elem(rng)
        rx, ry = nf_regular_rep(x), nf_regular_rep(y)
        ok = nf_regular_rep(x * y) == _mat4_mul(rx, ry) and nf_regular_rep(x + y) == [
            [a + b for a, b in zip(r1, r2)] for r1, r2 in zip(rx, ry)
        ]
        homs += ok
    ident = identity5()
    refl = 0
    for v in ref.normals.vectors:
        r = reflection_matrix(v)
        refl += is_lorentz(r) and mat_mul(r, r) == ident and mat_vec(r, v) == tuple(-c for c in v)
    restr = 0
    trials = 0
    for m in range(1, 9):
        for n in range(1, 9):
            if (m + n) % 3:
                continue
            r = rng.randint(0, min(m, n))
            a = _low_rank(rng, m, n, r)
            want = rank_by_minors(a.rows, ZERO, ONE)
            trials += 1
            restr += rank_nf(a) == want and rank_bareiss(clear_denominators(restrict_scalars(a))) == 4 * want
    a = _low_rank(rng, 8, 8, 8)
    want = rank_by_minors(a.rows, ZERO, ONE)
    trials += 1
    restr += want == 8 and rank_nf(a) == 8 and rank_bareiss(clear_denominators(restrict_scalars(a))) == 32
    conditions = {
        "field axioms": axioms == 1000,
        "homomorphism": homs == 500,
        "reflections": refl == 120,
        "restriction": restr == trials,
    }
    detail = (
        f"field axioms {axioms}/1000 triples, homomorphism {homs}/500 pairs, "
        f"Lorentz involutions {refl}/120, 4*rank_nf = restricted rank {restr}/{trials} up to 8x8 vs minor oracle"
    )
    _check(acceptance, "AC-9", conditions, detail)


def test_ac10_full_lattice(acceptance):
    cfg = pl.PipelineConfig(mode="full-lattice", strategies=("modular", "exact-nf"))
    t0 = time.perf_counter()
    report = pl.run_pipeline(cfg)
    secs = time.perf_counter() - t0
    confirmed = report.extra["kernel_dim_confirmed_by"]
    conditions = {
        "720x600": list(report.dims) == [720, 600],
        "kernel 130": report.kernel_dim == 130,
        "two strategies agree": len(confirmed) >= 2,
        "Rigid": report.rigid,
    }
    detail = (
        f"{report.dims[0]}x{report.dims[1]}, kernel {report.kernel_dim} confirmed by {', '.join(confirmed)} "
        f"(rank_nf {report.extra.get('rank_nf')}, mod 113 {report.ranks_mod_p.get(113)}), {secs:.1f} s"
    )
    _check(acceptance, "AC-10", conditions, detail)
