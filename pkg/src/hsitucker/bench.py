"""Benchmark harness comparing the three initializers on one cube.

One row per strategy with init/convergence timings, the per-sweep fitness
gains, per-factor timings over repeated runs and the estimated
multiplication counts. Reports serialize to CSV and JSON with identical
content, and render as the plain-text comparison tables.
"""

import csv
import io
import json
import re
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import List, Tuple

from .hooi import ConvergenceConfig, decompose
from .hsi_io import SyntheticSpec, load_cube, synth_hsi
from .initializers import (
    CORRELATION,
    RANDOM,
    SVD,
    InitStrategy,
    Ranks,
    estimate_init_cost,
    hosvd_factor,
    reference_band_factors,
    spectral_factor,
)
from .lowrank import random_orthonormal
from .tensor import as_tensor3

STRATEGY_ORDER = (RANDOM, SVD, CORRELATION)
_LIST_FIELDS = ("fitness_differences", "per_factor_seconds", "per_factor_multiplications")


@dataclass
class BenchmarkRow:
    dataset: str
    strategy: str
    dims: Tuple[int, int, int]
    ranks: Tuple[int, int, int]
    tol: float
    init_seconds: float
    iterations: int
    improving_sweeps: int
    converged: bool
    convergence_seconds: float
    total_seconds: float
    initial_fitness: float
    final_fitness: float
    fitness_differences: List[float] = field(default_factory=list)
    repeats: int = 0
    per_factor_seconds: List[float] = field(default_factory=list)
    estimated_multiplications: int = 0
    per_factor_multiplications: List[int] = field(default_factory=list)


@dataclass
class BenchmarkReport:
    rows: List[BenchmarkRow]

    def row(self, strategy):
        for r in self.rows:
            if r.strategy == strategy:
                return r
        raise KeyError(strategy)

    def to_records(self):
        return [asdict(r) for r in self.rows]

    def to_json(self):
        return json.dumps(self.to_records(), indent=2)

    def to_csv(self):
        buf = io.StringIO()
        names = [f.name for f in fields(BenchmarkRow)]
        writer = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
        writer.writeheader()
        for rec in self.to_records():
            writer.writerow({k: _csv_cell(v) for k, v in rec.items()})
        return buf.getvalue()

    @classmethod
    def from_json(cls, text):
        return cls([_row_from_record(rec) for rec in json.loads(text)])

    @classmethod
    def from_csv(cls, text):
        rows = []
        for rec in csv.DictReader(io.StringIO(text)):
            rows.append(_row_from_record({k: _parse_csv_cell(k, v) for k, v in rec.items()}))
        return cls(rows)


def _csv_cell(value):
    if isinstance(value, (list, tuple)):
        return ";".join(repr(v) for v in value)
    return repr(value) if isinstance(value, float) else value


def _parse_csv_cell(name, text):
    spec = {f.name: f.type for f in fields(BenchmarkRow)}[name]
    if name in _LIST_FIELDS or name in ("dims", "ranks"):
        items = [s for s in text.split(";") if s]
        conv = float if name in ("fitness_differences", "per_factor_seconds") else int
        return [conv(s) for s in items]
    if spec is bool:
        return text == "True"
    if spec is int:
        return int(text)
    if spec is float:
        return float(text)
    return text


def _row_from_record(rec):
    rec = dict(rec)
    rec["dims"] = tuple(rec["dims"])
    rec["ranks"] = tuple(rec["ranks"])
    for name in _LIST_FIELDS:
        rec[name] = list(rec[name])
    return BenchmarkRow(**rec)


_SYNTH = re.compile(r"^synth:(\d+)x(\d+)x(\d+)((?:,\w+=[^,]+)*)$")


def parse_dataset(text, header=None):
    """Load ``text`` as a cube file, or build one from ``synth:I1xI2xI3[,key=value...]``.

    Synthetic keys: ``rank`` (base rank), ``corr`` (band correlation),
    ``noise`` and ``seed``.
    """
    m = _SYNTH.match(text)
    if not m:
        return load_cube(Path(text), header)
    dims = tuple(int(g) for g in m.groups()[:3])
    opts = dict(kv.split("=", 1) for kv in m.group(4).split(",") if kv)
    unknown = set(opts) - {"rank", "corr", "noise", "seed"}
    if unknown:
        raise ValueError(f"unknown synthetic options {sorted(unknown)}")
    spec = SyntheticSpec(
        dims=dims,
        base_rank=int(opts["rank"]) if "rank" in opts else None,
        band_correlation=float(opts.get("corr", 0.99)),
        noise_sigma=float(opts.get("noise", 0.01)),
        seed=int(opts.get("seed", 0)),
    )
    return synth_hsi(spec)


def parse_ranks(text, dims):
    if text == "half":
        return Ranks.half(dims)
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"ranks must be 'half' or 'r1,r2,r3', got {text!r}")
    return Ranks(*(int(p) for p in parts)).check(dims)


def _timed(fn, repeats):
    start = time.perf_counter()
    for _ in range(repeats):
        result = fn()
    return time.perf_counter() - start, result


def time_factors(x, ranks, strategy, repeats):
    """Total seconds spent computing ``(u1, u2, u3)`` over ``repeats`` runs.

    The correlation strategy obtains ``u1`` and ``u2`` from one SVD; that
    joint time is booked on ``u1`` and ``u2`` reads 0.
    """
    x = as_tensor3(x)
    strategy = InitStrategy.coerce(strategy)
    r1, r2, r3 = ranks
    if repeats < 1:
        return [0.0, 0.0, 0.0]
    if strategy.kind == RANDOM:
        return [
            _timed(lambda n=n, d=d, r=r: random_orthonormal(d, r, strategy.seed ^ n), repeats)[0]
            for n, (d, r) in enumerate(zip(x.shape, ranks), start=1)
        ]
    if strategy.kind == SVD:
        return [_timed(lambda n=n, r=r: hosvd_factor(x, n, r), repeats)[0] for n, r in zip((1, 2, 3), ranks)]
    t12, (u1, u2) = _timed(lambda: reference_band_factors(x, r1, r2), repeats)
    t3, _ = _timed(lambda: spectral_factor(x, u1, u2, r3), repeats)
    return [t12, 0.0, t3]


def run_benchmark(x, ranks="half", cfg=None, repeats=100, seed=0, dataset="cube"):
    """Decompose ``x`` with every strategy under the same tolerance."""
    x = as_tensor3(x)
    cfg = cfg or ConvergenceConfig()
    ranks = parse_ranks(ranks, x.shape) if isinstance(ranks, str) else Ranks(*ranks).check(x.shape)
    rows = []
    for kind in STRATEGY_ORDER:
        strategy = InitStrategy(kind, seed)
        _, trace = decompose(x, ranks, strategy, cfg)
        cost = estimate_init_cost(x.shape, strategy, ranks)
        rows.append(
            BenchmarkRow(
                dataset=dataset,
                strategy=kind,
                dims=tuple(x.shape),
                ranks=tuple(ranks),
                tol=cfg.tol,
                init_seconds=trace.init_seconds,
                iterations=trace.iterations,
                improving_sweeps=trace.improving_sweeps,
                converged=trace.converged,
                convergence_seconds=trace.iteration_seconds,
                total_seconds=trace.init_seconds + trace.iteration_seconds,
                initial_fitness=trace.initial_fitness,
                final_fitness=trace.final_fitness,
                fitness_differences=list(trace.fitness_differences),
                repeats=repeats,
                per_factor_seconds=time_factors(x, ranks, strategy, repeats),
                estimated_multiplications=cost.init_multiplications,
                per_factor_multiplications=list(cost.per_factor),
            )
        )
    return BenchmarkReport(rows)


def _table(title, header, lines):
    widths = [max(len(str(row[i])) for row in [header, *lines]) for i in range(len(header))]
    fmt = "  ".join(f"{{:<{w}}}" if i == 0 else f"{{:>{w}}}" for i, w in enumerate(widths))
    out = [title, fmt.format(*header)]
    out += [fmt.format(*row) for row in lines]
    return "\n".join(out)


def format_tables(report, dash_random_init=False):
    """Plain-text comparison tables: timings/iterations, per-factor cost, fitness gains."""
    rows = [report.row(k) for k in STRATEGY_ORDER]
    header = ["", "Random", "SVD-based", "Correlation"]

    def init_cell(r):
        return "-" if dash_random_init and r.strategy == RANDOM else f"{r.init_seconds:.3f}"

    summary = _table(
        f"Initialization comparison ({rows[0].dataset}, ranks {rows[0].ranks}, tol {rows[0].tol:g})",
        header,
        [
            ["Initialization time (s)", *(init_cell(r) for r in rows)],
            ["Number of iterations", *(str(r.iterations) for r in rows)],
            ["Improving sweeps", *(str(r.improving_sweeps) for r in rows)],
            ["Convergence time (s)", *(f"{r.convergence_seconds:.3f}" for r in rows)],
            ["Total time (s)", *(f"{r.total_seconds:.3f}" for r in rows)],
            ["Final fitness", *(f"{r.final_fitness:.6f}" for r in rows)],
        ],
    )
    svd, corr = report.row(SVD), report.row(CORRELATION)
    per_factor = _table(
        f"Factor computation time (s) over {svd.repeats} runs",
        ["Factor matrix", "SVD-based", "Correlation"],
        [
            ["U1", f"{svd.per_factor_seconds[0]:.3f}", f"{corr.per_factor_seconds[0]:.3f} (U1+U2)"],
            ["U2", f"{svd.per_factor_seconds[1]:.3f}", ""],
            ["U3", f"{svd.per_factor_seconds[2]:.3f}", f"{corr.per_factor_seconds[2]:.3f}"],
            ["Total", f"{sum(svd.per_factor_seconds):.3f}", f"{sum(corr.per_factor_seconds):.3f}"],
            ["Est. multiplications", str(svd.estimated_multiplications), str(corr.estimated_multiplications)],
        ],
    )
    depth = max(len(r.fitness_differences) for r in rows)
    gains = _table(
        "Fitness difference per iteration",
        ["Iteration", "SVD-based", "Random", "Correlation"],
        [
            [str(k + 1)]
            + [
                f"{r.fitness_differences[k]:.3e}" if k < len(r.fitness_differences) else ""
                for r in (report.row(SVD), report.row(RANDOM), report.row(CORRELATION))
            ]
            for k in range(depth)
        ],
    )
    return "\n\n".join([summary, per_factor, gains])
