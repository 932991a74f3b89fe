"""Command line interface: ``rigid120 <subcommand> [options]``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import pipeline as pl
from .exactla import (
    FpMatrix,
    NFMatrix,
    QMatrix,
    ZMatrix,
    bareiss,
    clear_denominators,
    nf_elimination,
    rank_fp,
    reduce_mod,
    restrict_scalars,
)
from .matrix_io import MatrixFormatError, read_matrix, write_edges, write_matrix, write_normals
from .numfield import NFElem
from .polytope import independence_number
from .rigidity import build_jacobian


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split() if x]


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=pl.MODES, default="paper-instance")
    p.add_argument("--remove", type=_int_list, default=None, help="removed wall indices for custom-selection")
    p.add_argument("--primes", type=_int_list, default=None, help="comma-separated primes to try, in order")
    p.add_argument("--out", type=Path, default=None, help="output directory")
    p.add_argument("--emit-matrices", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-v", "--verbose", action="store_true")


def _config(args, strategies=("modular",)) -> pl.PipelineConfig:
    return pl.PipelineConfig(
        mode=args.mode,
        primes=args.primes,
        strategies=tuple(strategies),
        out_dir=args.out,
        emit_matrices=args.emit_matrices,
        seed=args.seed,
        removed=args.remove,
    )


def _strategies(text: str) -> tuple[str, ...]:
    return tuple(s.strip() for s in text.split(",") if s.strip())


def _out_stream(args, name: str):
    if args.out is None:
        return sys.stdout, False
    args.out.mkdir(parents=True, exist_ok=True)
    return open(args.out / name, "w", encoding="ascii"), True


def cmd_generate(args) -> int:
    inst = pl.build_instance(_config(args))
    fh, close = _out_stream(args, "normals.txt")
    try:
        write_normals(inst.normals, fh)
    finally:
        if close:
            fh.close()
    return 0


def cmd_check_combinatorics(args) -> int:
    inst = pl.build_instance(_config(args))
    g, sel = inst.graph, inst.selection
    summary = {
        "walls": g.n,
        "edges": g.edge_count(),
        "degrees": sorted({g.degree(i) for i in range(g.n)}),
        "contacts": g.contact_counts(),
        "removed": len(sel.removed),
        "kept": len(sel.kept),
        "faces": len(inst.faces),
    }
    ok = True
    if inst.combinatorics is not None:
        summary["certificate"] = inst.combinatorics.checks
        ok = inst.combinatorics.passed
    if args.exact_mis:
        summary["independence_number"] = independence_number(g)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        with open(args.out / "edges.txt", "w") as fh:
            write_edges(g, fh)
    print(json.dumps(summary, indent=2))
    return 0 if ok else 1


def cmd_build_jacobian(args) -> int:
    inst = pl.build_instance(_config(args))
    jac = build_jacobian(inst.normals, inst.selection, inst.faces)
    if args.out is None:
        print(f"{jac.nrows} {jac.ncols} NF")
        return 0
    args.out.mkdir(parents=True, exist_ok=True)
    write_matrix(jac, args.out / "A_alg.txt")
    if args.emit_matrices:
        q = restrict_scalars(jac)
        write_matrix(q, args.out / "A_Q.txt")
        write_matrix(clear_denominators(q), args.out / "A_Z.txt")
    print(f"wrote {args.out / 'A_alg.txt'} ({jac.nrows}x{jac.ncols})")
    return 0


def cmd_rank(args) -> int:
    if args.matrix is not None:
        mat = read_matrix(args.matrix)
    else:
        inst = pl.build_instance(_config(args))
        mat = build_jacobian(inst.normals, inst.selection, inst.faces)
    if isinstance(mat, FpMatrix):
        if args.mod is not None and args.mod != mat.p:
            print(f"matrix is over F_{mat.p}, cannot reduce mod {args.mod}", file=sys.stderr)
            return 2
        print(rank_fp(mat))
        return 0

    def as_z():
        if isinstance(mat, NFMatrix):
            return clear_denominators(restrict_scalars(mat))
        if isinstance(mat, QMatrix):
            return clear_denominators(mat)
        return mat

    if args.mod is not None:
        print(rank_fp(reduce_mod(as_z(), args.mod)))
    elif args.exact_z:
        res = bareiss(as_z())
        print(res.rank)
        print(f"max entry bits: {res.max_bits}", file=sys.stderr)
    else:
        if isinstance(mat, NFMatrix):
            rows = mat.rows
        else:
            rows = [[NFElem(x) for x in row] for row in mat.rows]
        print(nf_elimination(rows).rank)
    return 0


def _run_report(args, strategies) -> int:
    cfg = _config(args, strategies)
    report = pl.run_pipeline(cfg)
    print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
    if not report.rigid:
        print(
            f"verdict {report.verdict}: trivial kernel {report.trivial_kernel_dim} + rank bound "
            f"{report.certified_rank} != {report.dims[1]} columns",
            file=sys.stderr,
        )
        return 1
    return 0


def cmd_certify(args) -> int:
    return _run_report(args, ("modular",))


def cmd_run(args) -> int:
    return _run_report(args, _strategies(args.strategies))


def cmd_benchmark(args) -> int:
    cfg = _config(args, _strategies(args.strategies))
    matrix = None
    if args.random is not None:
        matrix = pl.random_zmatrix(args.random, args.random, seed=args.seed)
    elif args.matrix is not None:
        matrix = read_matrix(args.matrix)
        if isinstance(matrix, QMatrix):
            matrix = clear_denominators(matrix)
        elif isinstance(matrix, FpMatrix):
            matrix = ZMatrix(matrix.rows, matrix.ncols)
    table = pl.benchmark(cfg, matrix)
    print(json.dumps(table, indent=2, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rigid120", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write the 120 wall normals")
    _add_common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("check-combinatorics", help="adjacency graph and marker certificate")
    _add_common(p)
    p.add_argument("--exact-mis", action="store_true", help="also run the exact independent-set solver")
    p.set_defaults(func=cmd_check_combinatorics)

    p = sub.add_parser("build-jacobian", help="write the Jacobian over Q(alpha)")
    _add_common(p)
    p.set_defaults(func=cmd_build_jacobian)

    p = sub.add_parser("rank", help="rank of the Jacobian or of a matrix file")
    _add_common(p)
    p.add_argument("--matrix", type=Path, default=None, help="matrix file; default is the mode's Jacobian")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--mod", type=int, help="rank of the restricted integer matrix modulo this prime")
    g.add_argument("--exact-z", action="store_true", help="fraction-free rank over Z")
    g.add_argument("--exact-nf", action="store_true", help="rank over Q(alpha)")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("certify", help="modular rank certificate")
    _add_common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("run", help="full pipeline")
    _add_common(p)
    p.add_argument("--strategies", default="modular", help="comma list of modular, exact-nf, exact-bareiss")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("benchmark", help="time the rank strategies")
    _add_common(p)
    p.add_argument("--strategies", default="modular,exact-nf,exact-bareiss")
    p.add_argument("--random", type=int, default=None, metavar="N", help="random NxN integer matrix instead")
    p.add_argument("--matrix", type=Path, default=None)
    p.set_defaults(func=cmd_benchmark)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except pl.PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (MatrixFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
