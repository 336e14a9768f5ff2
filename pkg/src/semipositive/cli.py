"""Command-line front end.

Every subcommand prints one JSON document on stdout and exits with 0 when the
property holds (or the command succeeded), 1 when it fails, and 2 on input,
hypothesis or capacity errors.  Rationals are printed as ``"p/q"`` strings.
Witnesses and certificates are re-verified before anything is printed.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .cones import contains, contains_interior, dual, is_proper, orthant, read_cone
from .core import SemipositivityError, identity, rational, read_matrix, to_strings
from .patterns import (block_triangularize, is_fully_indecomposable, is_monomial,
                       is_row_positive)
from .preservers import (COUNTEREXAMPLE, STANDARD_FORM, Counterexample, analyze_preserver,
                         check_into_xay, falsify_preserver, kronecker_factor,
                         kronecker_factor_transposed, read_map)
from .semipos import (classify_msp, classify_sp, decompose_diff_msp, decompose_sum_sp,
                      is_left_sp, msp_basis, sample_sp, sp_basis, verify_left_sp)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class _SelfCheckFailed(Exception):
    pass


def _gate(ok: bool, what: str) -> None:
    if not ok:
        raise _SelfCheckFailed(f"self-check failed: {what}")


def _cones(args, m: int, n: int):
    K1 = read_cone(args.cone1) if args.cone1 else orthant(n)
    K2 = read_cone(args.cone2) if args.cone2 else orthant(m)
    return K1, K2


def _doc(args, verdict: str, **extra) -> dict:
    doc = {"command": f"{args.group} {args.action}", "verdict": verdict, "version": __version__}
    if getattr(args, "seed", None) is not None:
        doc["seed"] = args.seed
    doc.update(extra)
    return doc


def _cmd_check(args):
    A = read_matrix(args.matrix)
    m, n = A.shape
    K1, K2 = _cones(args, m, n)
    if args.action == "sp":
        v = classify_sp(A, K1, K2)
        _gate(v.verify(A, K1, K2), "semipositivity certificate")
        if v.semipositive:
            return 0, _doc(args, v.kind, witness=to_strings(v.witness))
        return 1, _doc(args, v.kind, certificate=to_strings(v.certificate))
    if args.action == "msp":
        c = classify_msp(A, K1, K2)
        if c.minimal:
            _gate(np.array_equal(c.left_inverse.dot(A), identity(n)),
                  "left inverse")
            return 0, _doc(args, c.kind, witness=to_strings(c.witness),
                           left_inverse=to_strings(c.left_inverse))
        if c.semipositive:
            return 1, _doc(args, c.kind, witness=to_strings(c.witness))
        return 1, _doc(args, c.kind, certificate=to_strings(c.certificate))
    v = is_left_sp(A, K1, K2, strict=args.strict)
    _gate(verify_left_sp(v, A, K1, K2, args.strict), "left semipositivity certificate")
    if v.semipositive:
        return 0, _doc(args, "LeftSemipositive", witness=to_strings(v.witness))
    return 1, _doc(args, "NotLeftSemipositive", certificate=to_strings(v.certificate))


def _cmd_cone(args):
    K = read_cone(args.cone)
    if args.action == "facets":
        return 0, _doc(args, "ok", dim=K.dim, facets=to_strings(K.facets))
    if args.action == "dual":
        D = dual(K)
        return 0, _doc(args, "ok", dim=D.dim, generators=to_strings(D.generators.T),
                       facets=to_strings(D.facets))
    if args.action == "proper":
        ok, why = is_proper(K)
        extra = {"reason": why} if why else {}
        return (0 if ok else 1), _doc(args, "proper" if ok else "not proper", **extra)
    if not args.point:
        raise UsageError("cone member needs the point coordinates")
    x = [rational(t) for t in args.point]
    inside = contains(K, x)
    interior = inside and is_proper(K)[0] and contains_interior(K, x)
    return (0 if inside else 1), _doc(args, "member" if inside else "not member",
                                      interior=bool(interior))


def _cmd_basis(args):
    m, n = args.m, args.n
    if m < 1 or n < 1:
        raise UsageError("m and n must be positive")
    K1, K2 = _cones(args, m, n)
    mats = sp_basis(m, n, K1, K2) if args.action == "sp" else msp_basis(m, n, K1, K2)
    return 0, _doc(args, "ok", basis=[to_strings(B) for B in mats])


def _cmd_decompose(args):
    A = read_matrix(args.matrix)
    m, n = A.shape
    K1, K2 = _cones(args, m, n)
    if args.action == "sum":
        B, C = decompose_sum_sp(A, K1, K2)
        _gate(np.array_equal(B + C, A), "A == B + C")
        return 0, _doc(args, "ok", B=to_strings(B), C=to_strings(C))
    C1, C2 = decompose_diff_msp(A, K1, K2)
    _gate(np.array_equal(C1 - C2, A), "A == C1 - C2")
    return 0, _doc(args, "ok", C1=to_strings(C1), C2=to_strings(C2))


def _factor_doc(f):
    return {"X": to_strings(f.X), "Y": to_strings(f.Y), "sign": f.sign, "kind": f.kind}


def _counterexample_doc(ce: Counterexample):
    return {"trial": ce.trial, "A": to_strings(ce.A), "witness": to_strings(ce.witness),
            "image": to_strings(ce.image), "certificate": to_strings(ce.certificate)}


def _cmd_preserver(args):
    L = read_map(args.map)
    K1, K2 = _cones(args, L.m, L.n)
    if args.action == "factor":
        f = kronecker_factor(L) or kronecker_factor_transposed(L)
        if f is None:
            return 1, _doc(args, "not Kronecker")
        _gate(f.to_map() == L, "factorization rebuilds the map")
        return 0, _doc(args, f.kind, factors=_factor_doc(f))
    if args.action == "check":
        f = kronecker_factor(L)
        if f is not None:
            Xs, Y = f.signed()
            into = check_into_xay(Xs, Y, K1, K2)
            return (0 if into else 1), _doc(args, "IntoPreserver" if into else "NotIntoPreserver",
                                            factors=_factor_doc(f))
        found = falsify_preserver(L, K1, K2, args.trials, args.seed)
        if isinstance(found, Counterexample):
            _gate(classify_sp(found.A, K1, K2).semipositive
                  and not classify_sp(found.image, K1, K2).semipositive, "counterexample")
            return 1, _doc(args, COUNTEREXAMPLE, trials=args.trials,
                           counterexample=_counterexample_doc(found))
        return 1, _doc(args, "Inconclusive", trials=args.trials)
    rep = analyze_preserver(L, K1, K2, args.trials, args.seed)
    doc = _doc(args, rep.verdict, invertible=rep.invertible, trials=rep.trials,
               into=rep.into, onto=rep.onto, notes=list(rep.notes))
    if rep.counterexample is not None:
        doc["counterexample"] = _counterexample_doc(rep.counterexample)
    if rep.rank_one is not None:
        r = rep.rank_one
        doc["rank_one"] = {"passed": r.passed} if r.passed else {
            "passed": False, "column": r.column, "A": to_strings(r.A), "rank": r.image_rank}
    if rep.factorization is not None:
        doc["factors"] = _factor_doc(rep.factorization)
    if rep.transposed_factorization is not None:
        doc["transposed_factors"] = _factor_doc(rep.transposed_factorization)
    return (0 if rep.verdict == STANDARD_FORM else 1), doc


def _cmd_pattern(args):
    A = read_matrix(args.matrix)
    if args.action == "rowpos":
        ok = is_row_positive(A)
        return (0 if ok else 1), _doc(args, "row positive" if ok else "not row positive")
    if A.shape[0] != A.shape[1]:
        raise UsageError("pattern commands other than rowpos need a square matrix")
    if args.action == "monomial":
        ok = is_monomial(A)
        return (0 if ok else 1), _doc(args, "monomial" if ok else "not monomial")
    if args.action == "full-indec":
        ok = is_fully_indecomposable(A)
        return (0 if ok else 1), _doc(args, "fully indecomposable" if ok
                                      else "partly decomposable")
    form = block_triangularize(A)
    P = form.apply(A)
    for a, b in form.blocks:
        _gate(not np.any(P[b:, a:b] != 0), "block triangular form")
    return 0, _doc(args, "ok", row_perm=list(form.row_perm), col_perm=list(form.col_perm),
                   blocks=[list(b) for b in form.blocks], kinds=list(form.kinds),
                   permuted=to_strings(P))


def _cmd_sample(args):
    m, n = args.m, args.n
    if m < 1 or n < 1:
        raise UsageError("m and n must be positive")
    K1, K2 = _cones(args, m, n)
    A = sample_sp(m, n, K1, K2, args.seed)
    v = classify_sp(A, K1, K2)
    _gate(v.semipositive and v.verify(A, K1, K2), "sample is semipositive")
    return 0, _doc(args, "ok", matrix=to_strings(A), witness=to_strings(v.witness))


def _add_cones(p):
    p.add_argument("--cone1", help="cone file for the domain (default: orthant)")
    p.add_argument("--cone2", help="cone file for the codomain (default: orthant)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="semipositive", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="semipositivity tests")
    p.add_argument("action", choices=["sp", "msp", "lsp"])
    p.add_argument("matrix")
    p.add_argument("--strict", action="store_true",
                   help="lsp: require the witness in the interior of the dual cone")
    _add_cones(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("cone", help="cone operations")
    p.add_argument("action", choices=["dual", "facets", "proper", "member"])
    p.add_argument("cone")
    p.add_argument("point", nargs="*", help="member: coordinates of the point")
    p.set_defaults(func=_cmd_cone)

    p = sub.add_parser("basis", help="bases of semipositive matrices")
    p.add_argument("action", choices=["sp", "msp"])
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    _add_cones(p)
    p.set_defaults(func=_cmd_basis)

    p = sub.add_parser("decompose", help="sum / difference decompositions")
    p.add_argument("action", choices=["sum", "diff"])
    p.add_argument("matrix")
    _add_cones(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("preserver", help="linear maps on matrix space")
    p.add_argument("action", choices=["check", "factor", "analyze"])
    p.add_argument("map")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    _add_cones(p)
    p.set_defaults(func=_cmd_preserver)

    p = sub.add_parser("pattern", help="zero-pattern predicates")
    p.add_argument("action", choices=["full-indec", "blocks", "monomial", "rowpos"])
    p.add_argument("matrix")
    p.set_defaults(func=_cmd_pattern)

    p = sub.add_parser("sample", help="random semipositive matrices")
    p.add_argument("action", choices=["sp"])
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int, default=0)
    _add_cones(p)
    p.set_defaults(func=_cmd_sample)
    return parser


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        code, doc = args.func(args)
    except (UsageError, SemipositivityError, OSError, ValueError, TypeError) as exc:
        msg = str(exc) or type(exc).__name__
        _emit({"error": msg, "version": __version__})
        print(f"semipositive: error: {msg}", file=sys.stderr)
        return 2
    except _SelfCheckFailed as exc:
        _emit({"error": str(exc), "version": __version__})
        print(f"semipositive: {exc}", file=sys.stderr)
        return 2
    _emit(doc)
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
