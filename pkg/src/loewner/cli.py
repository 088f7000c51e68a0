"""Command-line interface.

Exit codes: 0 success, 1 a mathematical "no" (infeasible, not maximal,
inadmissible parameter), 2 malformed input, 3 numerical failure.
stdout is ``key: value`` lines; matrices are printed inline in the matrix
file format.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .errors import DomainError, InputError, LoewnerError, NumericalError
from .mlbparam import Verdict, check_maximal, mlb, mub, recover_param
from .psdshort import generalized_short, gudder_unique, psd_mlb, rank_bound
from .quadrics import figure_data, tangency_points
from .symcore import DEFAULT_TOL, canonical_J, congruence_reduce, inertia, span, spectral_norm
from .tangency import TangencyProblem, solve_constrained, solve_single

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


def _emit(key, value):
    if isinstance(value, float):
        value = fileio.fmt(value)
    elif isinstance(value, bool):
        value = "true" if value else "false"
    print(f"{key}: {value}")


def _write(path, text):
    if path:
        Path(path).write_text(text + "\n")


def _pair(args):
    A = fileio.read_matrix(args.a)
    B = fileio.read_matrix(args.b)
    if A.shape != B.shape:
        raise InputError(f"A has order {A.shape[0]}, B has order {B.shape[0]}")
    return A, B


def _emit_inertia(prefix, inr):
    _emit(f"{prefix}p", inr.p)
    _emit(f"{prefix}q", inr.q)
    _emit(f"{prefix}r", inr.r)


def cmd_inertia(args):
    _emit_inertia("", inertia(fileio.read_matrix(args.a), args.tol))
    return EXIT_OK


def cmd_reduce(args):
    A, B = _pair(args)
    red = congruence_reduce(A, B, args.tol)
    _emit_inertia("", red.inertia)
    J = canonical_J(*red.inertia)
    resid = spectral_norm(red.P @ J @ red.P.T - (A - B)) / max(1.0, spectral_norm(A - B))
    _emit("residual", resid)
    _emit("P", fileio.matrix_text(red.P))
    _write(args.out, fileio.matrix_text(red.P))
    return EXIT_OK


def _bound(args, fn):
    A, B = _pair(args)
    red = congruence_reduce(A, B, args.tol)
    M = fileio.read_param(args.m) if args.m else None
    C = fn(A, B, red, M)
    _emit_inertia("", red.inertia)
    _emit("C", fileio.matrix_text(C))
    _write(args.out, fileio.matrix_text(C))
    return EXIT_OK


def cmd_mlb(args):
    return _bound(args, mlb)


def cmd_mub(args):
    return _bound(args, mub)


def cmd_recover(args):
    A, B = _pair(args)
    C = fileio.read_matrix(args.c)
    M = recover_param(A, B, congruence_reduce(A, B, args.tol), C, args.tol)
    _emit("M", fileio.param_text(M))
    _write(args.out, fileio.param_text(M))
    return EXIT_OK


def cmd_check(args):
    A, B = _pair(args)
    C = fileio.read_matrix(args.c)
    verdict = check_maximal(A, B, C, args.tol)
    _emit("verdict", verdict.value)
    return EXIT_OK if verdict is Verdict.MAXIMAL else EXIT_NO


def _emit_family(family, out):
    _emit("feasible", True)
    _emit("dim", family.dim)
    _emit("R0", fileio.param_text(family.R0))
    _write(out, fileio.family_text(family))


def cmd_constrained(args):
    A, B = _pair(args)
    n = A.shape[0]
    U = fileio.read_vectors(args.u) if args.u else np.zeros((0, n))
    V = fileio.read_vectors(args.v) if args.v else np.zeros((0, n))
    for X, label in ((U, "U"), (V, "V")):
        if X.size and X.shape[1] != n:
            raise InputError(f"{label} vectors have length {X.shape[1]}, expected {n}")
    prob = TangencyProblem(A, B, span(U, n=n, tol=args.tol), span(V, n=n, tol=args.tol))
    _emit_family(solve_constrained(prob, tol=args.tol), args.out)
    return EXIT_OK


def cmd_single(args):
    A, B = _pair(args)
    x = fileio.parse_vector_arg(args.x)
    _emit_family(solve_single(A, B, x, args.side, tol=args.tol), args.out)
    return EXIT_OK


def cmd_short(args):
    X = fileio.read_matrix(args.x)
    Y = fileio.read_matrix(args.y)
    if X.shape != Y.shape:
        raise InputError("X and Y must have the same order")
    S = generalized_short(X, Y, args.tol)
    _emit("short", fileio.matrix_text(S))
    _write(args.out, fileio.matrix_text(S))
    return EXIT_OK


def cmd_psd_mlb(args):
    A, B = _pair(args)
    Z = fileio.read_param(args.z) if args.z else None
    C = psd_mlb(A, B, Z, args.tol)
    _emit("C", fileio.matrix_text(C))
    _write(args.out, fileio.matrix_text(C))
    return EXIT_OK


def cmd_rank_bound(args):
    A, B = _pair(args)
    _emit("rank_bound", rank_bound(A, B, args.tol))
    return EXIT_OK


def cmd_gudder(args):
    A, B = _pair(args)
    _emit("unique", gudder_unique(A, B, args.tol))
    return EXIT_OK


def cmd_tangency(args):
    A = fileio.read_matrix(args.a)
    C = fileio.read_matrix(args.c)
    if A.shape != C.shape:
        raise InputError("A and C must have the same order")
    report = tangency_points(A, C, args.tol)
    _emit("finite", len(report.finite_points))
    _emit("infinite", len(report.infinite_directions))
    text = json.dumps(report.to_dict())
    _emit("report", text)
    _write(args.out, text)
    return EXIT_OK


def cmd_figures(args):
    A, B = _pair(args)
    params = [fileio.read_param(p) for p in args.params]
    paths = figure_data(A, B, params, args.out_dir, args.resolution, tol=args.tol)
    for path in paths:
        _emit("wrote", str(path))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loewner",
        description="Maximal lower bounds of symmetric matrices in the Loewner order.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, pair=True, out=True):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="relative zero threshold (default %(default)g)")
        if pair:
            sp.add_argument("--a", required=True, help="matrix file for A")
            sp.add_argument("--b", required=True, help="matrix file for B")
        if out:
            sp.add_argument("--out", help="write the result to this file")
        return sp

    sp = add("inertia", cmd_inertia, "inertia of a symmetric matrix", pair=False, out=False)
    sp.add_argument("--a", required=True)
    add("reduce", cmd_reduce, "congruence frame revealing the inertia of A-B")
    for name, func, what in (("mlb", cmd_mlb, "maximal lower"), ("mub", cmd_mub, "minimal upper")):
        sp = add(name, func, f"{what} bound with parameter M")
        sp.add_argument("--m", help="parameter file (default: zero)")
    sp = add("recover", cmd_recover, "parameter of a maximal lower bound")
    sp.add_argument("--c", required=True)
    sp = add("check", cmd_check, "classify C as a lower bound of A, B", out=False)
    sp.add_argument("--c", required=True)
    sp = add("constrained", cmd_constrained, "tangency-constrained solution family")
    sp.add_argument("--u", help="vectors where C must agree with B")
    sp.add_argument("--v", help="vectors where C must agree with A")
    sp = add("single", cmd_single, "single-vector tangency constraint")
    sp.add_argument("--x", required=True, help="comma-separated vector")
    sp.add_argument("--side", required=True, choices=["A", "B"],
                    help="C x = A x or C x = B x")
    sp = add("short", cmd_short, "generalized short [Y]X", pair=False)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp = add("psd-mlb", cmd_psd_mlb, "positive semidefinite maximal lower bound")
    sp.add_argument("--z", help="middle parameter file (default: zero)")
    add("rank-bound", cmd_rank_bound, "maximal rank of a PSD maximal lower bound", out=False)
    add("gudder", cmd_gudder, "uniqueness of the PSD maximal lower bound", out=False)
    sp = add("tangency", cmd_tangency, "tangency points of Q_C with Q_A", pair=False)
    sp.add_argument("--a", required=True)
    sp.add_argument("--c", required=True)
    sp = add("figures", cmd_figures, "boundary samples for plotting", out=False)
    sp.add_argument("--params", nargs="*", default=[], help="parameter files")
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--resolution", type=int, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not args.tol > 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_INPUT
    _emit("tol", args.tol)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        _emit("result", type(exc).__name__)
        print(f"{exc}", file=sys.stderr)
        _emit("message", str(exc))
        return EXIT_NO
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except LoewnerError as exc:  # pragma: no cover
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
