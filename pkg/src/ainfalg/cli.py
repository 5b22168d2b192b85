"""Command-line entry point: ``ainfalg <command> [options] FILE``.

FILE is a path to an algebra file, or the name of a bundled corpus entry
(``kronecker``, ``cyclic``, ``four_vertex`` ...). Every command prints one
JSON report on standard output with the keys command, input, input_digest,
result, hypothesis_flags and timing. Exit codes: 0 success, 1 domain error,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import io
from .ainf import AInfAlgebra, minimal_model, normalize_unitality, verify_ainf
from .algebra import format_vector, verify_algebra
from .dg import DgAlgebra, predicates, truncate_connective, verify_dg
from .errors import AlgebraError
from .trees import count_psi, iter_psi, tree_stats


class UsageError(Exception):
    pass


def _need_dg(alg, command):
    if not isinstance(alg, DgAlgebra):
        raise AlgebraError(f"{command} needs a DG algebra; the input has higher products")
    return alg


def _minimal(alg, flags):
    """The input as a minimal A-infinity algebra, transferring when d is nonzero."""
    if isinstance(alg, AInfAlgebra):
        if not alg.is_minimal:
            raise AlgebraError("input has m_1 != 0 together with higher products; not supported here")
        return alg
    if alg.is_formal_presentation():
        return AInfAlgebra.from_dg(alg)
    flags.append("d != 0: computed on the transferred minimal model (echelon retraction)")
    return minimal_model(alg)[0]


def _cmd_validate(f, args, flags):
    alg = f.algebra
    if isinstance(alg, AInfAlgebra):
        diag, kind = verify_ainf(alg), "AInfAlgebra"
    else:
        diag = verify_dg(alg) if alg.d else verify_algebra(alg.algebra)
        kind = "DgAlgebra"
    return {"kind": kind, "field": alg.field.name, "dim": alg.dim, "valid": diag.valid,
            "failures": list(diag.failures)}


def _cmd_cohomology(f, args, flags):
    A = _need_dg(f.algebra, "cohomology")
    p = predicates(A)
    H = A.cohomology()
    return {"dims": {str(k): v for k, v in sorted(A.cohomology_dims().items())},
            "basis": [{"name": n, "degree": d} for n, d in zip(H.names, H.degrees)],
            "proper": p.proper, "connective": p.connective, "amplitude": p.amplitude,
            "algebra": io.to_dict(H)}


def _cmd_truncate(f, args, flags):
    A = _need_dg(f.algebra, "truncate")
    T = truncate_connective(A)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(io.serialize(T))
    return {"dim": T.dim, "cohomology_dims": {str(k): v for k, v in sorted(T.cohomology_dims().items())},
            "algebra": io.to_dict(T)}


def _cmd_minimal_model(f, args, flags):
    A = _need_dg(f.algebra, "minimal-model")
    M, r = minimal_model(A, args.arity_cap)
    diag = verify_ainf(M)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(io.serialize(M))
    return {"dim": M.dim, "arity_cap": M.arity_cap, "valid": diag.valid,
            "retraction_check": bool(r.check()), "algebra": io.to_dict(M)}


def _cmd_trees(args, flags):
    if args.n is None or args.n < 1:
        raise UsageError("trees needs --n N with N >= 1")
    rows = []
    if args.n <= 9:
        for t in iter_psi(args.n, args.max_arity):
            row = {"operation": t.render()}
            if args.stats:
                s = tree_stats(t)
                row.update(v=s.v, abs_degree=s.abs_degree)
            rows.append(row)
    else:
        flags.append("n > 9: rows omitted, count only")
    return {"n": args.n, "max_arity": args.max_arity, "count": count_psi(args.n, args.max_arity), "rows": rows}


def _cmd_filtration(f, args, flags):
    from .filtration import (PersistsThrough, check_f1_equals_j, check_radical_preserved, compute_filtration,
                             detect_infinite, vanishing_bound)

    a = _minimal(f.algebra, flags)
    k = args.max
    filt = compute_filtration(a, k)
    verdict = detect_infinite(a, k)
    rad = check_radical_preserved(a)
    f1 = check_f1_equals_j(filt)
    try:
        bound = vanishing_bound(a)
    except AlgebraError as e:
        bound = None
        flags.append(f"no vanishing bound: {e}")
    out = {"dims": filt.dims(), "exact": filt.exact,
           "radical_preserved": rad.ok, "radical_witness": rad.witness,
           "f1_equals_j": f1.ok, "f1_witness": f1.witness,
           "vanishing_bound": bound, "verdict": str(verdict)}
    if isinstance(verdict, PersistsThrough):
        u = a.underlying()
        out["witness"] = {"n": verdict.n, "vector": format_vector(u, verdict.vector),
                          "operation": verdict.tree.render(),
                          "args": [format_vector(u, filt.J_basis[i]) for i in verdict.args]}
        out["levels"] = {format_vector(u, u.std(i)): filt.level_of(u.std(i)) for i in range(u.dim)}
        out["generators"] = {
            str(n): [{"vector": format_vector(u, g.vector), "operation": g.tree.render(),
                      "args": [format_vector(u, filt.J_basis[i]) for i in g.args]}
                     for g in filt.generators.get(n, [])]
            for n in (k - 1, k) if n >= 1}
    if not rad.ok:
        flags.append("m_n do not preserve the radical")
    return out


def _cmd_k0(f, args, flags):
    from .invariants import k0_rank

    r = k0_rank(f.algebra)
    return {"rank": r.rank, "simples": r.simple_labels, "h0_dim": r.h0_dim}


def _cmd_motive(f, args, flags):
    from .invariants import motive_report

    r = motive_report(f.algebra, claims=f.metadata)
    flags.extend(r.hypothesis_flags)
    return {"target": r.target, "unit_type_rank": r.split_rank, "k0_rank": r.rank,
            "block_sizes": r.block_sizes, "smoothness": r.smoothness}


def _window_report(w):
    return {"lo": w.lo, "hi": w.hi, "dims": {str(k): v for k, v in sorted(w.dims.items())},
            "cochain_dims": {str(k): v for k, v in sorted(w.cochain_dims.items())},
            "d_squared_zero": w.d_squared_zero,
            "representatives": {str(k): v for k, v in sorted(w.representatives.items())},
            "checks": w.checks}


def _cmd_hh(f, args, flags):
    from .hochschild import hochschild_window

    return _window_report(hochschild_window(_need_dg(f.algebra, "hh"), args.lo, args.hi))


def _cmd_ext(f, args, flags):
    from .hochschild import ext_window

    return _window_report(ext_window(_need_dg(f.algebra, "ext"), args.lo, args.hi))


def _cmd_smooth(f, args, flags):
    from .smoothness import NotSmooth, Smooth, replay, smoothness_probe

    v = smoothness_probe(f.algebra, args.max_steps)
    out = {"verdict": str(v)}
    if isinstance(v, (Smooth, NotSmooth)):
        out["replayed"] = replay(v)
    else:
        claimed = f.metadata.get("smooth")
        if claimed:
            flags.append(f"smoothness asserted by the input ({claimed}), not verified")
    return out


def _cmd_normalize(f, args, flags):
    a = f.algebra
    if not isinstance(a, AInfAlgebra):
        a = _minimal(a, flags)
    n = normalize_unitality(a)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(io.serialize(n, f.metadata or None))
    return {"valid": verify_ainf(n).valid, "algebra": io.to_dict(n)}


COMMANDS = {
    "validate": _cmd_validate, "cohomology": _cmd_cohomology, "truncate": _cmd_truncate,
    "minimal-model": _cmd_minimal_model, "filtration": _cmd_filtration, "k0": _cmd_k0,
    "motive": _cmd_motive, "hh": _cmd_hh, "ext": _cmd_ext, "smooth": _cmd_smooth,
    "normalize": _cmd_normalize,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ainfalg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("file")
        if name in ("truncate", "minimal-model", "normalize"):
            s.add_argument("--output", "-o", help="also write the resulting algebra file here")
        if name == "minimal-model":
            s.add_argument("--arity-cap", type=int, default=None)
        if name == "filtration":
            s.add_argument("--max", type=int, default=10, help="compute F^0..F^MAX; also the horizon")
        if name in ("hh", "ext"):
            s.add_argument("--lo", type=int, required=True)
            s.add_argument("--hi", type=int, required=True)
        if name == "smooth":
            s.add_argument("--max-steps", type=int, default=8)
    t = sub.add_parser("trees")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--stats", action="store_true")
    t.add_argument("--max-arity", type=int, default=None)
    return p


def run(argv=None) -> tuple[int, dict | None]:
    args = build_parser().parse_args(argv)
    flags: list[str] = []
    start = time.perf_counter()
    report = {"command": args.command}
    try:
        if args.command == "trees":
            report.update(input=None, input_digest=None)
            result = _cmd_trees(args, flags)
        else:
            f = io.load(args.file)
            report.update(input=args.file, input_digest=f.digest)
            result = COMMANDS[args.command](f, args, flags)
    except (UsageError, FileNotFoundError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2, None
    except AlgebraError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1, None
    report["result"] = result
    report["hypothesis_flags"] = flags
    report["timing"] = {"seconds": f"{time.perf_counter() - start:.3f}"}
    code = 1 if args.command == "validate" and not result["valid"] else 0
    return code, report


def main(argv=None) -> int:
    code, report = run(argv)
    if report is not None:
        print(json.dumps(report, indent=2, default=str))
    return code


if __name__ == "__main__":
    sys.exit(main())
