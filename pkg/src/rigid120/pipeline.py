"""End-to-end orchestration: normals -> combinatorics -> Jacobian -> ranks -> report."""

from __future__ import annotations

import json
import logging
import random
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .exactla import (
    NFMatrix,
    ZMatrix,
    bareiss,
    clear_denominators,
    is_prime,
    nf_elimination,
    prime_search_order,
    rank_fp,
    reduce_mod,
    restrict_scalars,
)
from .matrix_io import write_matrix
from .numfield import NFElem
from .polytope import (
    AdjacencyGraph,
    CertificateReport,
    NormalSet,
    WallSelection,
    adjacency_graph,
    disjointness_certificate,
    generate_normals,
    kept_face_pairs,
    make_selection,
    pairwise_ultraparallel,
    select_removed,
)
from .rigidity import (
    RigidityReport,
    basis_rank,
    build_jacobian,
    certify_rigidity,
    trivial_kernel_basis,
)

log = logging.getLogger(__name__)

MODES = ("paper-instance", "full-lattice", "custom-selection")
STRATEGIES = ("modular", "exact-bareiss", "exact-nf")


class PipelineError(RuntimeError):
    pass


@dataclass
class PipelineConfig:
    mode: str = "paper-instance"
    primes: list[int] | None = None
    strategies: tuple[str, ...] = ("modular",)
    out_dir: Path | None = None
    emit_matrices: bool = False
    seed: int = 0
    removed: list[int] | None = None

    def validate(self) -> None:
        if self.mode not in MODES:
            raise PipelineError(f"unknown mode {self.mode!r}; choose from {', '.join(MODES)}")
        if not self.strategies:
            raise PipelineError("at least one rank strategy must be enabled")
        bad = [s for s in self.strategies if s not in STRATEGIES]
        if bad:
            raise PipelineError(f"unknown strategies {bad}; choose from {', '.join(STRATEGIES)}")
        if self.mode == "custom-selection" and not self.removed:
            raise PipelineError("custom-selection needs an explicit list of removed walls")
        if self.primes is not None:
            for p in self.primes:
                if not is_prime(p) or p >= 1 << 31:
                    raise PipelineError(f"{p} is not a prime below 2^31")

    def prime_list(self) -> list[int]:
        return list(self.primes) if self.primes else prime_search_order(self.seed)


@dataclass
class Instance:
    normals: NormalSet
    graph: AdjacencyGraph
    selection: WallSelection
    faces: list[tuple[int, int]]
    combinatorics: CertificateReport | None = None


@dataclass
class _Timer:
    timings: dict[str, float] = field(default_factory=dict)

    @contextmanager
    def stage(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = self.timings.get(name, 0.0) + (time.perf_counter() - t0) * 1e3


def build_instance(cfg: PipelineConfig, timer: _Timer | None = None) -> Instance:
    timer = timer or _Timer()
    with timer.stage("generate"):
        ns = generate_normals()
    with timer.stage("adjacency"):
        g = adjacency_graph(ns)
    with timer.stage("combinatorics"):
        if cfg.mode == "paper-instance":
            sel = select_removed(ns)
            cert = disjointness_certificate(g, sel)
            if not cert.passed:
                failed = [k for k, ok in cert.checks.items() if not ok]
                raise PipelineError(f"combinatorics certificate failed: {failed}")
            return Instance(ns, g, sel, kept_face_pairs(g, sel), cert)
        if cfg.mode == "full-lattice":
            sel = make_selection(len(ns), [])
            return Instance(ns, g, sel, g.edges())
        sel = make_selection(len(ns), cfg.removed or [])
        if not pairwise_ultraparallel(ns, sel.removed):
            raise PipelineError("removed walls must be pairwise ultraparallel")
        return Instance(ns, g, sel, kept_face_pairs(g, sel))


def modular_ranks(z: ZMatrix, primes: Sequence[int], target: int | None = None) -> dict[int, int]:
    """Rank of ``z`` modulo each prime, stopping at the first that reaches ``target``."""
    ranks = {}
    for p in primes:
        ranks[p] = rank_fp(reduce_mod(z, p))
        log.info("rank mod %d = %d", p, ranks[p])
        if target is not None and ranks[p] >= target:
            break
    return ranks


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def run_pipeline(cfg: PipelineConfig) -> RigidityReport:
    """Run every stage and return the report; writes files when ``out_dir`` is set."""
    cfg.validate()
    timer = _Timer()
    inst = build_instance(cfg, timer)
    with timer.stage("build_jacobian"):
        jac = build_jacobian(inst.normals, inst.selection, inst.faces)
        trivial = trivial_kernel_basis(inst.normals, inst.selection)
    with timer.stage("trivial_kernel_rank"):
        kdim = basis_rank(trivial)
    needed = jac.ncols - kdim

    extra: dict = {
        "mode": cfg.mode,
        "strategies": list(cfg.strategies),
        "walls_kept": len(inst.selection.kept),
        "walls_removed": list(inst.selection.removed),
        "faces": len(inst.faces),
        "expected_trivial_dim": 10 + len(inst.selection.kept),
    }
    if inst.combinatorics is not None:
        extra["combinatorics"] = dict(inst.combinatorics.checks)
    lower_bounds: dict[str, int] = {}
    ranks_mod_p: dict[int, int] = {}
    z = None
    certifying_prime = None

    if "modular" in cfg.strategies or "exact-bareiss" in cfg.strategies or cfg.emit_matrices:
        with timer.stage("restrict_scalars"):
            q = restrict_scalars(jac)
            z = clear_denominators(q)
    if "modular" in cfg.strategies:
        with timer.stage("rank_mod_p"):
            ranks_mod_p = modular_ranks(z, cfg.prime_list(), 4 * needed)
        best = max(ranks_mod_p.values())
        lower_bounds["modular"] = _ceil_div(best, 4)
        certifying_prime = next((p for p, r in ranks_mod_p.items() if r == best), None)
    if "exact-nf" in cfg.strategies:
        with timer.stage("rank_nf"):
            res = nf_elimination(jac)
        lower_bounds["exact-nf"] = res.rank
        extra["rank_nf"] = res.rank
        extra["nf_max_entry_bits"] = res.max_bits
    if "exact-bareiss" in cfg.strategies:
        with timer.stage("rank_bareiss"):
            res_b = bareiss(z)
        lower_bounds["exact-bareiss"] = _ceil_div(res_b.rank, 4)
        extra["rank_bareiss"] = res_b.rank
        extra["bareiss_max_entry_bits"] = res_b.max_bits

    # each bound caps the kernel at cols - bound; it confirms the kernel
    # dimension when that cap meets the explicit trivial basis
    extra["kernel_upper_bound_by_strategy"] = {s: jac.ncols - b for s, b in lower_bounds.items()}
    extra["kernel_dim_confirmed_by"] = sorted(s for s, b in lower_bounds.items() if kdim + b == jac.ncols)
    # ties go to the modular bound, the primary certificate route
    source = max(lower_bounds, key=lambda s: (lower_bounds[s], s == "modular"))
    certified = lower_bounds[source]
    with timer.stage("certify"):
        report = certify_rigidity(jac, trivial, certified, source)
    report.ranks_mod_p = ranks_mod_p
    report.extra = extra
    report.timings_ms = {**timer.timings, **{f"certify.{k}": v for k, v in report.timings_ms.items()}}

    if cfg.out_dir is not None:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        if cfg.emit_matrices:
            with timer.stage("emit_matrices"):
                write_matrix(jac, out / "A_alg.txt")
                write_matrix(q, out / "A_Q.txt")
                write_matrix(z, out / "A_Z.txt")
                if certifying_prime is not None:
                    write_matrix(reduce_mod(z, certifying_prime), out / f"A_p{certifying_prime}.txt")
            report.timings_ms["emit_matrices"] = timer.timings["emit_matrices"]
        write_report(report, out / "report.json")
    return report


def write_report(report: RigidityReport, path: Path) -> None:
    path.write_text(json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n")


# --- benchmark --------------------------------------------------------------


def random_zmatrix(m: int, n: int, seed: int = 0, bound: int = 9) -> ZMatrix:
    rng = random.Random(seed)
    return ZMatrix([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(m)], n)


def benchmark(cfg: PipelineConfig, matrix: ZMatrix | NFMatrix | None = None) -> dict:
    """Time each enabled strategy; with no matrix, use the configured instance's Jacobian.

    For a ZMatrix input, the exact-nf strategy runs on the same integers viewed
    in Q(alpha) and ranks are reported for the matrix itself (no factor 4).
    """
    cfg.validate()
    table: dict = {"schema": 1, "mode": cfg.mode if matrix is None else "matrix", "strategies": {}}
    if matrix is None:
        inst = build_instance(cfg)
        nfm = build_jacobian(inst.normals, inst.selection, inst.faces)
    else:
        nfm = matrix if isinstance(matrix, NFMatrix) else None
    if isinstance(matrix, ZMatrix):
        z = matrix
        nf_rows = [[NFElem(x) for x in row] for row in matrix.rows]
    else:
        t0 = time.perf_counter()
        z = clear_denominators(restrict_scalars(nfm))
        table["restrict_ms"] = (time.perf_counter() - t0) * 1e3
        nf_rows = nfm.rows
    table["dims"] = [len(nf_rows), len(nf_rows[0]) if nf_rows else 0]
    table["restricted_dims"] = [z.nrows, z.ncols]

    if "modular" in cfg.strategies:
        per_prime = {}
        for p in cfg.primes or [113]:
            t0 = time.perf_counter()
            r = rank_fp(reduce_mod(z, p))
            per_prime[str(p)] = {"rank": r, "wall_ms": (time.perf_counter() - t0) * 1e3}
        table["strategies"]["modular"] = per_prime
    if "exact-bareiss" in cfg.strategies:
        t0 = time.perf_counter()
        res = bareiss(z)
        table["strategies"]["exact-bareiss"] = {
            "rank": res.rank,
            "wall_ms": (time.perf_counter() - t0) * 1e3,
            "max_entry_bits": res.max_bits,
        }
    if "exact-nf" in cfg.strategies:
        t0 = time.perf_counter()
        res_nf = nf_elimination(nf_rows)
        table["strategies"]["exact-nf"] = {
            "rank": res_nf.rank,
            "wall_ms": (time.perf_counter() - t0) * 1e3,
            "max_entry_bits": res_nf.max_bits,
        }
    if cfg.out_dir is not None:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "benchmark.json").write_text(json.dumps(table, indent=2, sort_keys=True) + "\n")
    return table

