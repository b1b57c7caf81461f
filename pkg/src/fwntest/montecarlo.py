"""Seeded Monte Carlo harness for size and power tables.

Each replication is keyed by ``(master_seed, dgp id, n, replication)`` and
is simulated once; every configured statistic is then evaluated on that
same sample through one shared :class:`~fwntest.autocov.GramStatistics`.
Counts are integers reduced in a fixed order, so the report does not
depend on how many workers ran the replications.
"""

from __future__ import annotations

import configparser
import csv
import hashlib
import io
import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .autocov import GramStatistics
from .bandwidth import resolve_bandwidth
from .dgp import DGP_IDS, DgpSpec, simulate
from .errors import ConfigError, FwnError
from .fspace import center as center_sample
from .kernels import KERNELS
from .whitenoise import BETA_MODES, VARIANTS, white_noise_test

__all__ = [
    "StatSpec",
    "McConfig",
    "McReport",
    "Cell",
    "replication_seed",
    "run",
    "render",
    "parse_csv",
    "load_config",
    "parse_config",
]

_DGP_LABELS = {"iid_bm": "IID-BM", "fgarch11": "fGARCH(1,1)", "far1": "FAR(1,{S:g})"}


@dataclass(frozen=True)
class StatSpec:
    variant: str = "raw"
    kernel: str = "bartlett"
    bandwidth: str = "fixed"
    beta_mode: str = "consistent"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"beta: unknown variant {self.variant!r}")
        if self.kernel not in KERNELS:
            raise ConfigError(f"kernel: unknown kernel {self.kernel!r}")
        if self.beta_mode not in BETA_MODES:
            raise ConfigError(f"beta_mode: unknown mode {self.beta_mode!r}")
        if self.bandwidth not in ("fixed", "adaptive"):
            try:
                if not float(self.bandwidth) > 0:
                    raise ValueError
            except ValueError:
                raise ConfigError(
                    f"bandwidth: expected adaptive, fixed or a positive number, "
                    f"got {self.bandwidth!r}"
                ) from None

    @property
    def label(self) -> str:
        sym = {"raw": "T_n", "beta1": "T_n^beta1", "betahat": "T_n^betahat"}[self.variant]
        extra = "" if self.variant != "betahat" or self.beta_mode == "consistent" else ",literal"
        return f"{sym}({self.kernel},{self.bandwidth}{extra})"


def dgp_label(spec: DgpSpec) -> str:
    return _DGP_LABELS[spec.id].format(S=spec.far_S)


@dataclass(frozen=True)
class McConfig:
    dgps: tuple[DgpSpec, ...]
    statistics: tuple[StatSpec, ...]
    n_values: tuple[int, ...]
    replications: int
    levels: tuple[float, ...] = (0.05, 0.01)
    master_seed: int = 0
    center: bool = False

    def __post_init__(self):
        if self.replications < 1:
            raise ConfigError("reps: must be >= 1")
        if not self.levels or any(not 0.0 < a <= 1.0 for a in self.levels):
            raise ConfigError("levels: each level must lie in (0, 1]")
        if not self.dgps:
            raise ConfigError("dgp: at least one data generating process is required")
        if not self.statistics:
            raise ConfigError("beta/kernel/bandwidth: no statistics configured")
        if not self.n_values or any(n < 3 for n in self.n_values):
            raise ConfigError("n: sample sizes must be >= 3")
        if self.master_seed < 0:
            raise ConfigError("seed: must be a nonnegative integer")


@dataclass(frozen=True)
class Cell:
    count: int
    replications: int
    failures: int = 0

    @property
    def rate(self) -> float:
        return self.count / self.replications


@dataclass
class McReport:
    """Rejection counts keyed by ``(dgp label, statistic label, n, level)``."""

    cells: dict
    replications: int
    master_seed: int
    dgps: tuple[str, ...]
    statistics: tuple[str, ...]
    n_values: tuple[int, ...]
    levels: tuple[float, ...]
    seconds: dict = field(default_factory=dict)
    sample_hashes: dict = field(default_factory=dict)

    def cell(self, dgp: str, stat: str, n: int, level: float) -> Cell:
        return self.cells[(dgp, stat, n, level)]

    @property
    def total_failures(self) -> int:
        return sum(c.failures for c in self.cells.values())


def replication_seed(master_seed: int, dgp_id: str, n: int, rep: int) -> int:
    """64-bit seed derived from the replication coordinates."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(DGP_IDS.index(dgp_id), n, rep))
    lo, hi = ss.generate_state(2, np.uint32)
    return int(lo) | (int(hi) << 32)


def _one_replication(dgp: DgpSpec, n: int, rep: int, master_seed: int, stats, center):
    spec = dgp.with_(n=n, seed=replication_seed(master_seed, dgp.id, n, rep))
    sample = simulate(spec)
    if center:
        sample = center_sample(sample)
    digest = hashlib.sha1(sample.values.tobytes()).hexdigest()[:16]
    gs = GramStatistics.of(sample)
    bw_cache = {}
    pvals = []
    for st in stats:
        try:
            key = (st.kernel, st.bandwidth)
            if key not in bw_cache:
                bw_cache[key] = resolve_bandwidth(gs, st.kernel, st.bandwidth)
            res = white_noise_test(gs, st.kernel, bw_cache[key], st.variant, st.beta_mode)
            pvals.append(res.p_value)
        except (FwnError, ArithmeticError, np.linalg.LinAlgError):
            pvals.append(math.nan)
    return pvals, digest


def _run_chunk(args):
    dgp, n, reps, master_seed, stats, center = args
    out = []
    for rep in reps:
        out.append(_one_replication(dgp, n, rep, master_seed, stats, center))
    return out


def run(config: McConfig, workers: int = 1, progress=None, chunk_size: int = 25) -> McReport:
    """Simulate every (dgp, n) cell and count rejections per statistic and level.

    Parameters
    ----------
    workers : int
        Number of worker processes; 1 runs in-process.  The report is
        identical for any value.
    progress : callable, optional
        Called as ``progress(dgp_label, n, seconds)`` after each cell.
    """
    stats = tuple(config.statistics)
    stat_labels = tuple(s.label for s in stats)
    if len(set(stat_labels)) != len(stat_labels):
        raise ConfigError("statistics: duplicate statistic configured")
    dgp_labels = tuple(dgp_label(d) for d in config.dgps)
    if len(set(dgp_labels)) != len(dgp_labels):
        raise ConfigError("dgp: duplicate data generating process configured")
    cells = {}
    seconds = {}
    hashes = {}
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for dgp, dlabel in zip(config.dgps, dgp_labels):
            for n in config.n_values:
                t0 = time.perf_counter()
                reps = list(range(config.replications))
                chunks = [
                    (dgp, n, reps[i : i + chunk_size], config.master_seed, stats, config.center)
                    for i in range(0, len(reps), chunk_size)
                ]
                if pool is None:
                    results = [r for c in chunks for r in _run_chunk(c)]
                else:
                    results = [r for part in pool.map(_run_chunk, chunks) for r in part]
                pv = np.array([r[0] for r in results], dtype=float).reshape(len(results), len(stats))
                hashes[(dlabel, n)] = tuple(r[1] for r in results)
                failed = np.isnan(pv)
                for si, slabel in enumerate(stat_labels):
                    nfail = int(failed[:, si].sum())
                    for level in config.levels:
                        count = int(np.sum(pv[~failed[:, si], si] < level))
                        cells[(dlabel, slabel, n, level)] = Cell(count, config.replications, nfail)
                seconds[(dlabel, n)] = time.perf_counter() - t0
                if progress is not None:
                    progress(dlabel, n, seconds[(dlabel, n)])
    finally:
        if pool is not None:
            pool.shutdown()
    return McReport(
        cells, config.replications, config.master_seed, dgp_labels, stat_labels,
        tuple(config.n_values), tuple(config.levels), seconds, hashes,
    )


def _level_str(level: float) -> str:
    return f"{100 * level:g}%"


def _columns(report: McReport):
    return list(itertools.product(report.dgps, report.n_values, report.levels))


def render(report: McReport, format: str = "csv") -> str:
    """Table with one row per statistic and column groups per (dgp, n, level)."""
    if not report.cells:
        raise FwnError("empty report")
    cols = _columns(report)
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ["statistic"]
        for d, n, a in cols:
            header += [f"{d} n={n} {_level_str(a)} count", f"{d} n={n} {_level_str(a)} rate"]
        header.append("failures")
        w.writerow(header)
        for s in report.statistics:
            row = [s]
            fails = 0
            for d, n, a in cols:
                c = report.cell(d, s, n, a)
                row += [c.count, repr(c.rate)]
                if a == report.levels[0]:
                    fails += c.failures
            row.append(fails)
            w.writerow(row)
        return buf.getvalue()
    if format == "markdown":
        lines = [
            f"Rejections out of {report.replications} replications "
            f"(master seed {report.master_seed}).",
            "",
        ]
        head = ["Statistic"] + [f"{d} n={n} {_level_str(a)}" for d, n, a in cols] + ["failures"]
        lines.append("| " + " | ".join(head) + " |")
        lines.append("|" + "---|" * len(head))
        for s in report.statistics:
            row = [s]
            fails = 0
            for d, n, a in cols:
                c = report.cell(d, s, n, a)
                row.append(f"{c.count} ({c.rate:.3f})")
                if a == report.levels[0]:
                    fails += c.failures
            row.append(str(fails))
            lines.append("| " + " | ".join(row) + " |")
        return "\n".join(lines) + "\n"
    raise FwnError(f"unknown format {format!r}; choose csv or markdown")


def parse_csv(text: str) -> dict:
    """Read counts back from :func:`render` CSV output.

    Returns ``{(statistic, column label): count}``.
    """
    rows = list(csv.reader(io.StringIO(text)))
    header = rows[0]
    out = {}
    for row in rows[1:]:
        for name, val in zip(header[1:], row[1:]):
            if name.endswith(" count"):
                out[(row[0], name[: -len(" count")])] = int(val)
    return out


def _split(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def parse_config(text: str) -> tuple[McConfig, dict]:
    """Parse a ``key = value`` campaign file.

    Keys: ``dgp``, ``n``, ``reps``, ``kernel``, ``bandwidth``, ``beta``,
    ``levels``, ``seed``; optional ``m``, ``far_S``, ``beta_mode``,
    ``center``, ``workers``.  List values are comma separated.  Statistics
    are the product of ``beta`` x ``kernel`` x ``bandwidth``.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        cp.read_string("[mc]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None
    sec = dict(cp["mc"])
    known = {
        "dgp", "n", "reps", "kernel", "bandwidth", "beta", "levels", "seed",
        "m", "far_s", "beta_mode", "center", "workers",
    }
    unknown = set(sec) - known
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    for req in ("dgp", "n", "reps"):
        if req not in sec:
            raise ConfigError(f"{req}: required key missing")

    def ints(key, default=None):
        if key not in sec:
            return default
        try:
            return [int(v) for v in _split(sec[key])]
        except ValueError:
            raise ConfigError(f"{key}: expected integer(s), got {sec[key]!r}") from None

    def floats(key, default=None):
        if key not in sec:
            return default
        try:
            return [float(v) for v in _split(sec[key])]
        except ValueError:
            raise ConfigError(f"{key}: expected number(s), got {sec[key]!r}") from None

    m = ints("m", [100])[0]
    far_s = floats("far_s", [0.3])
    dgps = []
    for d in _split(sec["dgp"]):
        if d not in DGP_IDS:
            raise ConfigError(f"dgp: unknown process {d!r}; choose from {', '.join(DGP_IDS)}")
        try:
            if d == "far1":
                dgps.extend(DgpSpec(d, n=1, m=m, far_S=s) for s in far_s)
            else:
                dgps.append(DgpSpec(d, n=1, m=m))
        except FwnError as exc:
            raise ConfigError(f"dgp: {exc}") from None
    reps = ints("reps")[0]
    seed = ints("seed", [0])[0]
    levels = floats("levels", [0.05, 0.01])
    variants = _split(sec.get("beta", "raw"))
    kernels = _split(sec.get("kernel", "bartlett"))
    bws = _split(sec.get("bandwidth", "fixed"))
    beta_mode = sec.get("beta_mode", "consistent").strip()
    stats = tuple(
        StatSpec(v, k, b, beta_mode) for v, k, b in itertools.product(variants, kernels, bws)
    )
    center = sec.get("center", "false").strip().lower() in ("1", "true", "yes", "on")
    workers = ints("workers", [1])[0]
    cfg = McConfig(
        tuple(dgps), stats, tuple(ints("n")), reps, tuple(levels), seed, center
    )
    return cfg, {"workers": workers}


def load_config(path) -> tuple[McConfig, dict]:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
