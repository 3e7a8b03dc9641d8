"""Command-line interface: ``unitratio {eval,sample,moment,fit,curves}``.

Exit codes: 0 success, 2 usage or domain error, 3 numerical failure,
4 optimiser non-convergence (the best estimate is still printed).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from . import dists, mle, moments
from .dists import Family, UnitDistSpec
from .errors import (ConvergenceError, DegenerateDataError, DomainError, PreconditionError,
                     SingularHessianError)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_NOCONV = 0, 2, 3, 4

CURVE_POINTS = 512
DEFAULT_CURVE_SHAPES = ((1.0, 1.0), (2.0, 2.0), (1.0, 3.0), (2.0, 5.0), (5.0, 1.5))
DEFAULT_CURVE_RATIOS = (0.5, 1.0, 1.8)


class UsageError(Exception):
    pass


def _number(name):
    def conv(text):
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}") from None
        return v
    return conv


def _add_params(p, with_r=True):
    p.add_argument("--family", required=True, type=str.upper, choices=["W", "Z"],
                   help="w or z (case-insensitive)")
    for name in ("alpha1", "alpha2"):
        p.add_argument(f"--{name}", required=True, type=_number(name))
    for name in ("lambda1", "lambda2"):
        p.add_argument(f"--{name}", type=_number(name), default=1.0)
    if with_r:
        p.add_argument("--r", required=True, type=_number("r"))


def _spec(args):
    return UnitDistSpec.make(args.family, args.alpha1, args.alpha2, args.lambda1, args.lambda2,
                             args.r)


def _parse_grid(text):
    try:
        start, stop, count = text.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise UsageError(f"--grid expects start:stop:count, got {text!r}") from None
    if count < 1:
        raise UsageError("--grid count must be at least 1")
    return np.linspace(start, stop, count)


def _parse_points(text):
    try:
        return np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError:
        raise UsageError(f"--points expects comma-separated numbers, got {text!r}") from None


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline="", encoding="utf-8"), True


def _write_rows(path, header, rows):
    fh, close = _open_out(path)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    finally:
        if close:
            fh.close()


def _fmt(v):
    return repr(float(v))


def cmd_eval(args):
    spec = _spec(args)
    if (args.grid is None) == (args.points is None):
        raise UsageError("give exactly one of --grid or --points")
    xs = _parse_grid(args.grid) if args.grid is not None else _parse_points(args.points)
    if args.fn == "quantile":
        vals = dists.quantile(spec, xs)
        header = ("p", "quantile")
    else:
        vals = {"pdf": dists.pdf, "cdf": dists.cdf}[args.fn](spec, xs)
        header = ("u", "value")
    _write_rows(args.out, header, [(_fmt(x), _fmt(v)) for x, v in zip(xs, np.atleast_1d(vals))])
    return EXIT_OK


def cmd_sample(args):
    batch = dists.sample(_spec(args), args.n, args.seed)
    fh, close = _open_out(args.out)
    try:
        fh.write("".join(f"{v:.17g}\n" for v in batch.values))
    finally:
        if close:
            fh.close()
    return EXIT_OK


_METHODS = {"auto": moments.Method.AUTO, "closed": moments.Method.CLOSED_FORM,
            "quad": moments.Method.QUADRATURE}


def cmd_moment(args):
    req = moments.MomentRequest(_spec(args), args.order, _METHODS[args.method])
    res = moments.moment(req)
    print(f"value={res.value!r}")
    print(f"method={'closed' if res.method is moments.Method.CLOSED_FORM else 'quad'}")
    print(f"formula={res.formula}")
    return EXIT_OK


def read_data(path):
    """Values from a text file: one per line, blanks and ``#`` comments ignored."""
    fh = sys.stdin if path == "-" else open(path, encoding="utf-8")
    vals = []
    try:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                v = float(text)
            except ValueError:
                raise UsageError(f"line {lineno}: not a number: {text!r}") from None
            if not (0.0 < v < 1.0):
                raise UsageError(f"line {lineno}: value {text} outside the open interval (0, 1)")
            vals.append(v)
    finally:
        if fh is not sys.stdin:
            fh.close()
    if not vals:
        raise UsageError("data file contains no values")
    return np.array(vals)


def cmd_fit(args):
    data = read_data(args.data)
    res = mle.fit(args.family, data, profile=args.profile.replace("-", "_"), starts=args.starts,
                  seed=args.seed)
    out = io.StringIO()
    out.write(f"fit of the {args.family} family to {data.size} values "
              f"({res.constraint_profile.value} profile)\n")
    if res.degenerate:
        out.write(f"warning: {mle.DEGENERACY_NOTE}\n")
    if not res.converged:
        out.write("warning: optimiser did not converge; best estimate follows\n")
    out.write(res.report())
    fh, close = _open_out(args.out)
    try:
        fh.write(out.getvalue())
    finally:
        if close:
            fh.close()
    return EXIT_OK if res.converged else EXIT_NOCONV


def _read_curve_grid(path):
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.replace(",", " ").split()
            if parts[0].lower() == "alpha1":
                continue
            try:
                vals = [float(v) for v in parts]
            except ValueError:
                raise UsageError(f"line {lineno}: expected alpha1 alpha2 [lambda1 lambda2]") \
                    from None
            if len(vals) == 2:
                vals += [1.0, 1.0]
            if len(vals) != 4:
                raise UsageError(f"line {lineno}: expected 2 or 4 numbers, got {len(vals)}")
            rows.append(tuple(vals))
    return rows


def curve_grid(spec, m=CURVE_POINTS):
    """``m`` interior points, denser toward the endpoints where the density may blow up."""
    t = (np.arange(m) + 0.5) / m
    return 0.5 - 0.5 * np.cos(np.pi * t)


def cmd_curves(args):
    if args.grid_file:
        sets = _read_curve_grid(args.grid_file)
    else:
        sets = [(a1, a2, 1.0, rho) for a1, a2 in DEFAULT_CURVE_SHAPES
                for rho in DEFAULT_CURVE_RATIOS]
    rows = []
    for fam in (Family.W, Family.Z):
        for a1, a2, l1, l2 in sets:
            spec = UnitDistSpec.make(fam, a1, a2, l1, l2, args.r)
            u = curve_grid(spec)
            f = dists.pdf(spec, u)
            for ui, fi in zip(u, f):
                rows.append((fam.value, _fmt(a1), _fmt(a2), _fmt(l1), _fmt(l2), _fmt(args.r),
                             _fmt(ui), _fmt(fi)))
    _write_rows(args.out, ("family", "alpha1", "alpha2", "lambda1", "lambda2", "r", "u", "pdf"),
                rows)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="unitratio",
                                 description="W and Z unit-interval distributions")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate pdf, cdf or quantile")
    _add_params(p)
    p.add_argument("--fn", required=True, choices=["pdf", "cdf", "quantile"])
    p.add_argument("--grid", help="start:stop:count")
    p.add_argument("--points", help="comma-separated values")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sample", help="draw random values")
    _add_params(p)
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("moment", help="raw moment E(U^n)")
    _add_params(p)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--method", choices=sorted(_METHODS), default="auto")
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("fit", help="maximum likelihood fit to a data file")
    p.add_argument("--family", required=True, type=str.upper, choices=["W", "Z"])
    p.add_argument("--data", required=True, help="path, or - for stdin")
    p.add_argument("--profile", choices=["lambda1-fixed", "full"], default="lambda1-fixed")
    p.add_argument("--starts", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("curves", help="density curves over a parameter grid")
    p.add_argument("--r", required=True, type=_number("r"))
    p.add_argument("--grid-file", help="lines of alpha1 alpha2 [lambda1 lambda2]")
    p.add_argument("--out")
    p.set_defaults(func=cmd_curves)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, DomainError, PreconditionError, DegenerateDataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (SingularHessianError, ArithmeticError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
