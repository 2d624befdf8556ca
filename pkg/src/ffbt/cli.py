"""Command-line front end: ``ffbt <subcommand> ...``.

Every command reads and writes the text containers of :mod:`ffbt.io`;
tabular output is CSV, single results follow ``--format``.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import warnings
from pathlib import Path

from . import io as fio
from .cases import CASES, get_case
from .coefficients import ErrorBudget, build_kernel, epsilon_plan
from .convolution import iffbt_conv
from .errors import InvalidArgumentError
from .fourier import finite_fourier_table
from .oracle import (
    QuadratureSpec,
    direct_convolution,
    fb_coefficient_quadrature,
    fourier_integral_quadrature,
    lens_area,
    partial_sum_reference,
    truncated_closed_form,
)
from .sampling import Grid, SampledField, sample
from .special import bessel_zero
from .study import StudyConfig, run_conv_study, run_study, scaled
from .transform import eval_points, ffbt_block, iffbt, steer_residual

__all__ = ["main", "build_parser"]


def _int_list(text: str) -> tuple:
    return tuple(int(v) for v in text.replace(" ", "").split(",") if v)


def _modes(text: str) -> tuple:
    out = []
    for part in text.split(";"):
        m, n = _int_list(part)
        out.append((m, n))
    return tuple(out)


def _emit(args, payload: dict):
    if args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(list(payload))
        w.writerow([fio.fmt(v) if isinstance(v, float) else v for v in payload.values()])
    else:
        print(json.dumps(payload, sort_keys=True))


def _write_csv(path, header, rows):
    if path:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        fh = open(path, "w", newline="")
    else:
        fh = sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fio.fmt(v) if isinstance(v, float) else v for v in row])
    finally:
        if path:
            fh.close()


def _cmd_zeros(args):
    rows = [(m, n, bessel_zero(m, n)) for m in range(args.m_max + 1) for n in range(1, args.n_max + 1)]
    _write_csv(args.out, ["m", "n", "z"], rows)
    return 0


def _cmd_kernel(args):
    kern = build_kernel((args.m, args.n), args.K, cache_dir=args.out)
    _emit(args, {"m": kern.idx.m, "n": kern.idx.n, "K": kern.K, "L": kern.L, "dir": str(args.out)})
    return 0


def _cmd_fourier(args):
    fld = fio.read_field(args.input)
    K = args.kmax
    if 2 * K + 1 > fld.L:
        print(f"note: |k|_inf > {(fld.L - 1) // 2} lies outside the accuracy regime of this grid",
              file=sys.stderr)
    table = finite_fourier_table(fld, K)
    rows = [(k1, k2, float(table[k1 + K, k2 + K].real), float(table[k1 + K, k2 + K].imag))
            for k1 in range(-K, K + 1) for k2 in range(-K, K + 1)]
    _write_csv(args.out, ["k1", "k2", "re", "im"], rows)
    return 0


def _cmd_sample(args):
    case = get_case(args.case)
    f = case.g if args.which == "g" else case.f
    if f is None:
        raise InvalidArgumentError(f"case {case.name!r} has no factor g")
    a = case.a if args.a is None else args.a
    fld = sample(f, args.grid, a)
    fio.write_field(args.output, SampledField(fld.grid, fld.values, a, {"case": case.name}))
    return 0


def _cmd_analyze(args):
    fld = fio.read_field(args.input)
    spec = ffbt_block(fld, args.M, args.N, args.K)
    fio.write_spectrum(args.out, spec)
    return 0


def _cmd_synthesize(args):
    spec = fio.read_spectrum(args.spec)
    L_eval = args.eval_grid or 2 * spec.K + 1
    _, pts = eval_points(L_eval, spec.a)
    vals = iffbt(spec, pts).reshape(L_eval, L_eval)
    fio.write_field(args.out, SampledField(Grid(L_eval), vals, spec.a, {"M": spec.M, "N": spec.N, "K": spec.K}))
    return 0


def _cmd_steer(args):
    case = get_case(args.case)
    a = case.a if args.a is None else args.a
    res = steer_residual(case.f, (args.m, args.n), args.K, args.phi, a)
    _emit(args, {"case": case.name, "m": args.m, "n": args.n, "K": args.K, "phi": args.phi,
                 "residual": res})
    return 0


def _cmd_convolve(args):
    F, G = fio.read_field(args.f), fio.read_field(args.g)
    a = args.a if args.a is not None else F.a
    L_eval = args.eval_grid or F.L
    _, pts = eval_points(L_eval, a)
    vals = iffbt_conv(F, G, args.M, args.N, args.K, pts / a).reshape(L_eval, L_eval)
    meta = {"M": args.M, "N": args.N, "K": args.K, "jacobian": a * a}
    fio.write_field(args.out, SampledField(Grid(L_eval), vals, a, meta))
    return 0


def _study_cfg(args) -> StudyConfig:
    return StudyConfig(
        case=args.case,
        K_list=_int_list(args.K_list) if args.K_list else (),
        M=args.M, N=args.N, a=args.a, eval_grid=args.eval_grid,
        out=args.out, fields_dir=getattr(args, "fields_dir", None),
        modes=_modes(args.modes) if getattr(args, "modes", None) else ((0, 1), (1, 1)),
        threads=args.threads, seed=args.seed,
    )


def _report(args, report) -> int:
    if not args.out:
        sys.stdout.write(report.csv_text())
    print(json.dumps(report.summary(), sort_keys=True), file=sys.stderr)
    return 0 if report.passed else 1


def _cmd_study(args):
    return _report(args, run_study(_study_cfg(args)))


def _cmd_conv_study(args):
    return _report(args, run_conv_study(_study_cfg(args)))


def _cmd_oracle(args):
    case = get_case(args.case)
    a = case.a if args.a is None else args.a
    f = scaled(case.f, a)
    q = QuadratureSpec(args.radial_nodes, args.angular_nodes, args.cartesian_nodes)
    if args.op == "fb-coefficient":
        val = fb_coefficient_quadrature(f, (args.m, args.n), q)
    elif args.op == "fourier-integral":
        val = fourier_integral_quadrature(f, (args.k1, args.k2), q)
    elif args.op == "closed-form":
        val = truncated_closed_form(f, (args.m, args.n), args.cutoff, q)
    elif args.op == "convolution":
        if case.g is None:
            raise InvalidArgumentError(f"case {case.name!r} has no factor g")
        val = direct_convolution(f, scaled(case.g, a), (args.x, args.y),
                                 QuadratureSpec(cartesian_nodes=args.cartesian_nodes))
    elif args.op == "partial-sum":
        val = complex(partial_sum_reference(f, args.M or 0, args.N or 1, q)(args.x, args.y))
    else:
        val = complex(lens_area(args.r, args.s, args.d))
    _emit(args, {"op": args.op, "case": case.name, "re": float(val.real), "im": float(val.imag)})
    return 0


def _cmd_epsilon_plan(args):
    budget = ErrorBudget(c_f=args.c_f, d_fg=args.d_fg, grad_norm=args.grad_norm,
                         wiener_norm=args.wiener_norm)
    K, L = epsilon_plan(args.eps, budget, args.mode, m=args.m, n=args.n,
                        M=args.M or 0, N=args.N or 1, k=(args.k1, args.k2))
    _emit(args, {"mode": args.mode, "eps": args.eps, "K": K, "L": L})
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ffbt", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("zeros", help="table of Bessel zeros z_{m,n}")
    s.add_argument("--m-max", type=int, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=_cmd_zeros)

    s = sub.add_parser("kernel", help="precompute and store Q / Qx kernel files")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--K", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_kernel)

    s = sub.add_parser("fourier", help="finite Fourier transform table of a field")
    s.add_argument("--input", required=True)
    s.add_argument("--kmax", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=_cmd_fourier)

    s = sub.add_parser("sample", help="sample a registered case into a field file")
    s.add_argument("--case", required=True, choices=sorted(CASES))
    s.add_argument("--which", choices=("f", "g"), default="f")
    s.add_argument("--grid", type=int, required=True)
    s.add_argument("--a", type=float)
    s.add_argument("--output", required=True)
    s.set_defaults(func=_cmd_sample)

    s = sub.add_parser("analyze", help="FFBT spectrum of a field")
    s.add_argument("--input", required=True)
    s.add_argument("--M", type=int, required=True)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--K", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_analyze)

    s = sub.add_parser("synthesize", help="iFFBT of a spectrum on an evaluation grid")
    s.add_argument("--spec", required=True)
    s.add_argument("--eval-grid", type=int)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_synthesize)

    s = sub.add_parser("steer", help="steerability residual of a registered case")
    s.add_argument("--case", required=True, choices=sorted(CASES))
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--K", type=int, required=True)
    s.add_argument("--phi", type=float, required=True)
    s.add_argument("--a", type=float)
    s.set_defaults(func=_cmd_steer)

    s = sub.add_parser("convolve", help="unified iFFBT of the convolution of two fields")
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--M", type=int, required=True)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--K", type=int, required=True)
    s.add_argument("--a", type=float)
    s.add_argument("--eval-grid", type=int)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_convolve)

    for name, func, helptext in (("study", _cmd_study, "convergence study of a case"),
                                 ("conv-study", _cmd_conv_study, "unified convolution gap study")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--case", required=True, choices=sorted(CASES))
        s.add_argument("--K-list", dest="K_list")
        s.add_argument("--M", type=int)
        s.add_argument("--N", type=int)
        s.add_argument("--a", type=float)
        s.add_argument("--eval-grid", type=int)
        s.add_argument("--out")
        if name == "study":
            s.add_argument("--fields-dir")
        else:
            s.add_argument("--modes", help='semicolon-separated "m,n" pairs, e.g. "0,1;1,1"')
        s.set_defaults(func=func)

    s = sub.add_parser("oracle", help="reference quadratures")
    s.add_argument("--op", required=True, choices=("fb-coefficient", "fourier-integral", "closed-form",
                                                   "convolution", "partial-sum", "lens-area"))
    s.add_argument("--case", default="bump", choices=sorted(CASES))
    s.add_argument("--a", type=float)
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--M", type=int)
    s.add_argument("--N", type=int)
    s.add_argument("--k1", type=int, default=0)
    s.add_argument("--k2", type=int, default=0)
    s.add_argument("--cutoff", type=int, default=16)
    s.add_argument("--x", type=float, default=0.0)
    s.add_argument("--y", type=float, default=0.0)
    s.add_argument("--r", type=float, default=0.5)
    s.add_argument("--s", type=float, default=0.5)
    s.add_argument("--d", type=float, default=0.0)
    s.add_argument("--radial-nodes", type=int, default=256)
    s.add_argument("--angular-nodes", type=int, default=512)
    s.add_argument("--cartesian-nodes", type=int, default=128)
    s.set_defaults(func=_cmd_oracle)

    s = sub.add_parser("epsilon-plan", help="band limit certified for a target error")
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--mode", required=True, choices=("fourier", "single", "block", "conv", "conv-block"))
    s.add_argument("--c-f", type=float)
    s.add_argument("--d-fg", type=float)
    s.add_argument("--grad-norm", type=float)
    s.add_argument("--wiener-norm", type=float)
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--M", type=int)
    s.add_argument("--N", type=int)
    s.add_argument("--k1", type=int, default=0)
    s.add_argument("--k2", type=int, default=0)
    s.set_defaults(func=_cmd_epsilon_plan)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    warnings.simplefilter("default")
    try:
        return int(args.func(args) or 0)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
