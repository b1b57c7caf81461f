"""Command line interface: ``fwntest {test,simulate,mc,bandwidth}``."""

from __future__ import annotations

import argparse
import dataclasses
import csv
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .bandwidth import adaptive_bandwidth, resolve_bandwidth
from .dgp import DGP_IDS, DgpSpec, simulate
from .errors import DegenerateSampleError, FwnError
from .fspace import FunctionalSample, Grid, center, difference
from .kernels import KERNELS
from .montecarlo import load_config, render, run
from .whitenoise import BETA_MODES, VARIANTS, white_noise_test


class CsvFormatError(FwnError):
    pass


def _fmt(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse_row(row, lineno):
    out = []
    for col, cell in enumerate(row, start=1):
        try:
            x = float(cell)
        except ValueError:
            raise CsvFormatError(f"row {lineno}, column {col}: cannot parse {cell!r} as a number") from None
        if not math.isfinite(x):
            raise CsvFormatError(f"row {lineno}, column {col}: non-finite value {cell!r}")
        out.append(x)
    return out


def _looks_like_header(vals) -> bool:
    v = np.asarray(vals)
    return v.size >= 2 and v[0] > 0 and v[-1] <= 1 and bool(np.all(np.diff(v) > 0))


def _grid_from_points(points) -> Grid:
    pts = np.asarray(points, dtype=float)
    m = pts.size
    uniform = np.arange(1, m + 1) / m
    if np.allclose(pts, uniform, rtol=0, atol=1e-12):
        return Grid.uniform(m)
    return Grid(pts, np.diff(np.concatenate([[0.0], pts])))


def read_curves(path, header: str = "auto") -> FunctionalSample:
    """Load a CSV with one curve per row and an optional grid header row."""
    try:
        fh = sys.stdin if path == "-" else open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise FwnError(f"cannot read {path}: {exc.strerror}") from None
    with fh:
        rows = [(i, r) for i, r in enumerate(csv.reader(fh), start=1) if any(c.strip() for c in r)]
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")
    parsed = [(i, _parse_row(r, i)) for i, r in rows]
    width = len(parsed[0][1])
    for i, vals in parsed:
        if len(vals) != width:
            raise CsvFormatError(f"row {i}: expected {width} columns, found {len(vals)}")
    use_header = header == "yes" or (header == "auto" and _looks_like_header(parsed[0][1]))
    if use_header:
        if not _looks_like_header(parsed[0][1]) and width > 1:
            raise CsvFormatError("row 1: header must be strictly increasing grid points in (0, 1]")
        grid = _grid_from_points(parsed[0][1])
        parsed = parsed[1:]
    else:
        grid = None
    if not parsed:
        raise CsvFormatError(f"{path}: header row but no curves")
    return FunctionalSample(np.array([v for _, v in parsed]), grid)


def write_curves(sample: FunctionalSample, path) -> None:
    """Write curves with a header row of grid points; atomic when writing a file."""
    lines = [",".join(repr(float(t)) for t in sample.grid.points)]
    lines += [",".join(repr(float(x)) for x in row) for row in sample.values]
    text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    _atomic_write(path, text)


def _atomic_write(path, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fwntest-", suffix=".tmp")
    except OSError as exc:
        raise FwnError(f"cannot write {path}: {exc.strerror}") from None
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _prepare(args) -> FunctionalSample:
    sample = read_curves(args.path, args.header)
    if args.diff:
        sample = difference(sample)
    if sample.n < 3:
        raise FwnError(f"at least 3 curves are needed, got {sample.n}")
    if args.center:
        sample = center(sample)
    if not np.any(sample.values):
        raise DegenerateSampleError("all curves are identically zero; nothing to test")
    return sample


def cmd_test(args) -> int:
    sample = _prepare(args)
    p = resolve_bandwidth(sample, args.kernel, args.bandwidth)
    res = white_noise_test(sample, args.kernel, p, args.variant, args.beta_mode)
    record = {
        "statistic": res.statistic,
        "variant": res.variant,
        "beta": res.beta,
        "p_value": res.p_value,
        "bandwidth": res.bandwidth,
        "kernel": res.kernel,
        "n": res.n,
        "m": sample.m,
    }
    for k, v in record.items():
        print(f"{k}={_fmt(v)}")
    return 0


def cmd_bandwidth(args) -> int:
    sample = _prepare(args)
    res = adaptive_bandwidth(sample, args.kernel)
    for k, v in res.to_record().items():
        print(f"{k}={_fmt(v)}")
    return 0


def cmd_simulate(args) -> int:
    spec = DgpSpec(
        args.dgp, n=args.n, m=args.m, burnin=args.burnin, far_S=args.far_S, seed=args.seed
    )
    write_curves(simulate(spec), args.out)
    return 0


def cmd_mc(args) -> int:
    cfg, extra = load_config(args.config)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, master_seed=args.seed)
    workers = args.workers if args.workers is not None else extra["workers"]

    def progress(dgp, n, secs):
        print(f"[mc] {dgp} n={n}: {cfg.replications} reps in {secs:.1f}s", file=sys.stderr)

    report = run(cfg, workers=workers, progress=progress)
    text = render(report, args.format)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        _atomic_write(args.out, text)
    if report.total_failures:
        print(f"[mc] warning: {report.total_failures} failed evaluations", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fwntest", description="Spectral white noise test for functional time series."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def data_args(p):
        p.add_argument("path", help="CSV file, one curve per row ('-' for stdin)")
        p.add_argument("--kernel", choices=list(KERNELS), default="bartlett")
        p.add_argument("--center", action=argparse.BooleanOptionalAction, default=True,
                       help="subtract the mean curve before testing (default on)")
        p.add_argument("--diff", action="store_true", help="test first-differenced curves")
        p.add_argument("--header", choices=["auto", "yes", "no"], default="auto",
                       help="whether the first row holds grid points")

    p = sub.add_parser("test", help="test one sample for serial correlation")
    data_args(p)
    p.add_argument("--bandwidth", default="adaptive", help="adaptive, fixed or a number")
    p.add_argument("--variant", choices=list(VARIANTS), default="beta1")
    p.add_argument("--beta-mode", choices=list(BETA_MODES), default="consistent")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("bandwidth", help="show the plug-in bandwidth and its ingredients")
    data_args(p)
    p.set_defaults(func=cmd_bandwidth)

    p = sub.add_parser("simulate", help="write a simulated sample as CSV")
    p.add_argument("--dgp", choices=list(DGP_IDS), default="iid_bm")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=100)
    p.add_argument("--burnin", type=int, default=None)
    p.add_argument("--far-S", dest="far_S", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("mc", help="run a Monte Carlo size/power campaign")
    p.add_argument("config", help="key = value campaign file")
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=["csv", "markdown"], default="csv")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.set_defaults(func=cmd_mc)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FwnError as exc:
        print(f"fwntest {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
