"""Command-line front end.

Commands: ``generate``, ``embed``, ``discriminate``, ``sweep``, ``check``.
Exit codes: 0 success, 2 usage or I/O problem, 3 numerical failure. Errors
are reported on a single stderr line of the form ``error[<reason>]: ...``.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import datasets as ds
from . import discriminant as dc
from . import distgeom as dg
from . import mds
from . import spectral
from . import transforms as tr
from .errors import (
    ConvergenceError,
    InternalError,
    NotEuclideanError,
    NumericalError,
    ParseError,
    SchoenbergError,
)

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 2, 3
DIVISIBLE_POWERS = (0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0)


class UsageError(SchoenbergError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail("usage", message, EXIT_USAGE)


def _fail(reason, message, code):
    print(f"error[{reason}]: {' '.join(str(message).split())}", file=sys.stderr)
    raise SystemExit(code)


# argparse types: everything is parsed before any computation -----------------

def _existing_file(value):
    if not os.path.isfile(value):
        raise argparse.ArgumentTypeError(f"no such file: {value}")
    return value


def _transform(value):
    try:
        return tr.parse_transform(value)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _distribution_spec(value):
    if value == "uniform":
        return ("uniform", None)
    if value.startswith("point-mass:"):
        try:
            k = int(value.split(":", 1)[1])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad point-mass index in {value!r}") from None
        if k < 1:
            raise argparse.ArgumentTypeError("point-mass index is 1-based")
        return ("point-mass", k)
    return ("file", _existing_file(value))


def _weights_spec(value):
    if value == "uniform":
        return ("uniform", None)
    return ("file", _existing_file(value))


def _grid(value):
    try:
        if ":" in value:
            start, stop, step = (float(v) for v in value.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + k * step, 12) for k in range(count)]
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {value!r}; use start:stop:step or a,b,c") from None


def _nonneg(value):
    x = float(value)
    if x < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return x


def _common(suppress):
    # Subcommands get SUPPRESS defaults so flags given before the command survive.
    def dflt(value):
        return argparse.SUPPRESS if suppress else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=dflt(0), help="random seed for generators")
    common.add_argument("--tol", type=_nonneg, default=dflt(spectral.DEFAULT_TOL),
                        help="relative eigenvalue tolerance (default 1e-9)")
    common.add_argument("--out", default=dflt(None), help="output CSV path (stdout when omitted, where applicable)")
    common.add_argument("--matrix", action="store_true", default=dflt(False),
                        help="input is a square headerless squared-distance matrix")
    common.add_argument("--mahalanobis", action="store_true", default=dflt(False),
                        help="whiten coordinates before computing distances")
    common.add_argument("--covariance", choices=("auto", "total", "within"), default=dflt("auto"),
                        help="covariance used by --mahalanobis; auto = within-group when labelled")
    common.add_argument("--origin", type=_distribution_spec, default=dflt(("uniform", None)),
                        help="uniform | point-mass:k | CSV of a signed distribution")
    common.add_argument("--weights", type=_weights_spec, default=dflt(("uniform", None)),
                        help="uniform | CSV of positive weights")
    common.add_argument("--transform", type=_transform, default=dflt(tr.identity()),
                        help="e.g. identity, gaussian:a=0.65, power:a=0.4, compose(rational:a=1,power:a=0.5)")
    common.add_argument("--validate", action="store_true", default=dflt(False),
                        help="check that an input matrix is squared Euclidean on ingestion")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common(suppress=True)
    parser = _Parser(prog="schoenberg", description=__doc__.splitlines()[0], parents=[_common(False)])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", parents=[common], help="write a synthetic point cloud")
    p.add_argument("--kind", choices=("grid", "rod", "circles"), required=True)
    p.add_argument("--side", type=int, default=10)
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--per-group", type=int, default=50)

    p = sub.add_parser("embed", parents=[common], help="transform distances and run weighted MDS")
    p.add_argument("input", type=_existing_file)
    p.add_argument("--dims", type=int, help="number of coordinate columns to write")
    p.add_argument("--scree", help="scree CSV path (default: <out>_scree.csv)")
    p.add_argument("--top", type=int, default=4, help="proportions printed")

    p = sub.add_parser("discriminate", parents=[common], help="nearest-centroid classification")
    p.add_argument("input", type=_existing_file)
    p.add_argument("--labels", type=_existing_file, help="labels file (one per line) for --matrix input")

    p = sub.add_parser("sweep", parents=[common], help="accuracy over a transform family")
    p.add_argument("input", type=_existing_file)
    p.add_argument("--labels", type=_existing_file, help="labels file (one per line) for --matrix input")
    p.add_argument("--family", choices=dc.FAMILIES, required=True)
    p.add_argument("--grid", type=_grid, required=True, help="start:stop:step (inclusive) or a,b,c")

    p = sub.add_parser("check", parents=[common], help="c.n.d. / p.d. diagnostics")
    p.add_argument("input", type=_existing_file)
    p.add_argument("--kind", choices=("auto", "distance", "kernel"), default="auto",
                   help="auto: zero diagonal means distance, otherwise kernel")
    p.add_argument("--divisible", action="store_true", help="sampled infinite-divisibility sweep")
    p.add_argument("--powers", type=_grid, default=list(DIVISIBLE_POWERS))
    return parser


# helpers ------------------------------------------------------------------

def _load_input(args, need_labels=False):
    """Return ``(D, labels)`` from a cloud CSV or a distance matrix."""
    if args.matrix:
        if args.mahalanobis:
            raise UsageError("--mahalanobis needs coordinates, not a --matrix input")
        D = dg.as_squared_distances(ds.load_matrix(args.input), check_cnd=args.validate, tol=args.tol)
        labels = None
        if getattr(args, "labels", None):
            labels = dg.as_labels(ds.load_vector(args.labels))
            if labels.size != D.shape[0]:
                raise UsageError(f"{labels.size} labels for a matrix of order {D.shape[0]}")
    else:
        cloud = ds.load_csv(args.input)
        if args.mahalanobis:
            within = args.covariance == "within" or (args.covariance == "auto" and cloud.labels is not None)
            cloud = ds.mahalanobis_standardize(cloud, within_groups=within)
        D = ds.squared_distances(cloud)
        labels = cloud.labels
    if need_labels and labels is None:
        raise UsageError("input has no labels (add a 'label' column or --labels)")
    return D, labels


def _distribution(spec, n, weights=False):
    kind, value = spec
    if kind == "uniform":
        return dg.uniform(n)
    if kind == "point-mass":
        if value > n:
            raise UsageError(f"point-mass index {value} exceeds {n} objects")
        return dg.point_mass(n, value - 1)
    vec = ds.load_vector(value)
    if weights:
        # weight files may hold counts or frequencies; only positivity is required
        if np.all(vec > 0):
            vec = vec / vec.sum()
        return dg.as_weights(vec, n)
    return dg.as_signed_distribution(vec, n, "origin")


def _open_out(path):
    if path is None or path == "-":
        return _Stdout()
    try:
        return open(path, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


class _Stdout:
    def __enter__(self):
        return sys.stdout

    def __exit__(self, *exc):
        sys.stdout.flush()
        return False


def _fmt(x):
    return ds.format_number(x)


# commands -----------------------------------------------------------------

def cmd_generate(args):
    if args.kind == "grid":
        cloud = ds.generate_grid(args.side, args.spacing)
    elif args.kind == "rod":
        cloud = ds.generate_rod(args.n, args.seed)
    else:
        cloud = ds.generate_circles(args.per_group, args.seed)
    with _open_out(args.out) as fh:
        ds.write_csv(fh, cloud.coordinates, cloud.labels)
    return EXIT_OK


def cmd_embed(args):
    D, _ = _load_input(args)
    n = D.shape[0]
    f = _distribution(args.weights, n, weights=True)
    a = _distribution(args.origin, n)
    Dt = tr.apply(args.transform, D, check=False)
    E = mds.weighted_mds(Dt, f, a, tol=args.tol)
    props = mds.reconstruction_proportions(E)
    if args.out:
        shown = mds.truncate(E, min(args.dims, E.dims)) if args.dims else E
        with _open_out(args.out) as fh:
            ds.write_csv(fh, shown.coordinates, prefix="dim")
    scree = args.scree
    if scree is None and args.out and args.out != "-":
        out = Path(args.out)
        scree = str(out.with_name(out.stem + "_scree.csv"))
    if scree:
        with _open_out(scree) as fh:
            fh.write("dim,eigenvalue,proportion,cumulative\n")
            rows = zip(E.eigenvalues, props, np.cumsum(props))
            for k, (lam, pr, cum) in enumerate(rows, start=1):
                fh.write(f"{k},{_fmt(lam)},{_fmt(pr)},{_fmt(cum)}\n")
    top = props[: args.top]
    print(f"transform: {args.transform}")
    print(f"dimensions: {props.size}")
    print("proportions: " + " ".join(f"{p:.4f}" for p in top))
    print(f"cumulative: {float(top.sum()):.4f}")
    return EXIT_OK


def cmd_discriminate(args):
    D, labels = _load_input(args, need_labels=True)
    Dt = tr.apply(args.transform, D, check=False)
    res = dc.classify_transformed(Dt, labels)
    correct = int(np.sum(res.assignments == labels))
    if args.out:
        with _open_out(args.out) as fh:
            fh.write("index,label,assigned\n")
            for i, (lab, asg) in enumerate(zip(labels, res.assignments), start=1):
                fh.write(f"{i},{lab},{asg}\n")
    print(f"transform: {args.transform}")
    print(f"accuracy: {res.accuracy:.6f} ({correct}/{labels.size})")
    return EXIT_OK


def cmd_sweep(args):
    D, labels = _load_input(args, need_labels=True)
    res = dc.parameter_sweep(D, labels, args.family, args.grid, tol=args.tol)
    with _open_out(args.out) as fh:
        fh.write("parameter,accuracy,invalid_transform\n")
        for a, acc, bad in zip(res.grid, res.accuracy, res.invalid_transform):
            fh.write(f"{_fmt(a)},{_fmt(acc)},{'true' if bad else 'false'}\n")
    if args.out:
        best = int(np.argmax(res.accuracy))
        print(f"family: {res.family}  points: {res.grid.size}  "
              f"best accuracy {res.accuracy[best]:.4f} at a={_fmt(res.grid[best])}")
    return EXIT_OK


def _yes(flag):
    return "yes" if flag else "no"


def cmd_check(args):
    if args.matrix:
        M = spectral.as_symmetric(ds.load_matrix(args.input))
    else:
        M = ds.squared_distances(ds.load_csv(args.input))
    kind = args.kind
    if kind == "auto":
        kind = "distance" if np.all(np.diag(M) == 0) else "kernel"
    print(f"order: {M.shape[0]}")
    print(f"kind: {kind}")
    if kind == "distance":
        w = spectral.eigenvalues(spectral.uniform_centered_products(M))
        print(f"c.n.d.: {_yes(w[-1] >= spectral.negativity_threshold(w, args.tol))}")
        print(f"min eigenvalue (centred scalar products): {_fmt(w[-1])}")
        kernel_at = lambda lam: tr.gaussian_kernel(M, lam)  # noqa: E731
    else:
        w = spectral.eigenvalues(M)
        print(f"p.d.: {_yes(w[-1] >= spectral.negativity_threshold(w, args.tol))}")
        print(f"min eigenvalue: {_fmt(w[-1])}")

        def kernel_at(lam):
            with np.errstate(invalid="ignore"):
                return np.power(M, lam)

    if args.divisible:
        label = "exp(-lam D)" if kind == "distance" else "K^lam (entrywise)"
        every = True
        for lam in args.powers:
            K = kernel_at(lam)
            ok = bool(np.all(np.isfinite(K))) and spectral.is_pd(K, args.tol)
            every &= ok
            print(f"p.d. {label} at lam={_fmt(lam)}: {_yes(ok)}")
        print(f"infinitely divisible (sampled): {_yes(every)}")
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "embed": cmd_embed,
    "discriminate": cmd_discriminate,
    "sweep": cmd_sweep,
    "check": cmd_check,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except NotEuclideanError as exc:
        _fail("not-euclidean", f"{exc} (eigenvalue={_fmt(exc.eigenvalue)})", EXIT_NUMERICAL)
    except ConvergenceError as exc:
        _fail("convergence", exc, EXIT_NUMERICAL)
    except (NumericalError, InternalError) as exc:
        _fail("numerical", exc, EXIT_NUMERICAL)
    except ParseError as exc:
        _fail("parse", exc, EXIT_USAGE)
    except UsageError as exc:
        _fail("usage", exc, EXIT_USAGE)
    except SchoenbergError as exc:
        _fail("invalid-input", exc, EXIT_USAGE)
    except OSError as exc:
        _fail("io", f"{exc.filename or ''}: {exc.strerror or exc}", EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
