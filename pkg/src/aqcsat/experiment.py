"""Ensemble experiments: maximal Brody parameter and DPLL cost versus clause ratio.

Every instance seed is ``child_seed(config.seed, f_index, instance_index)``;
results are assembled in (f, instance) order, so output depends only on the
configuration and never on the number of worker processes.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .brody import max_brody
from .hamiltonian import build_system
from .sat import dpll_solve, generate_instance
from .seeding import child_seed
from .spectrum import sweep

__all__ = [
    "ExperimentConfig",
    "ExperimentError",
    "InstanceRecord",
    "CurveRecord",
    "ComplexityCurve",
    "BaselineRecord",
    "clause_count",
    "default_f_grid",
    "run_instance",
    "run_experiment",
    "run_classical_baseline",
]

log = logging.getLogger(__name__)


class ExperimentError(RuntimeError):
    pass


def default_f_grid() -> tuple[float, ...]:
    return tuple(0.25 * k for k in range(1, 33))


def clause_count(f: float, n: int) -> int:
    """m = round(f * n), halves rounded up."""
    return int(math.floor(f * n + 0.5))


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 8
    f_grid: tuple[float, ...] = field(default_factory=default_f_grid)
    instances_per_f: int = 200
    interpolation_points: int = 100
    seed: int = 0
    poly_degree: int = 6
    edge_trim_fraction: float = 0.05
    window: tuple[int, int] | None = None
    min_sample: int = 50
    max_degenerate_fraction: float = 0.5
    q_upper: float = 1.5
    include_invalid: bool = True
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "f_grid", tuple(float(f) for f in self.f_grid))
        if self.window is not None:
            object.__setattr__(self, "window", tuple(int(w) for w in self.window))
        if self.instances_per_f < 1:
            raise ValueError("instances_per_f must be at least 1")
        if self.interpolation_points < 2:
            raise ValueError("interpolation_points must be at least 2")
        if not self.f_grid:
            raise ValueError("f_grid is empty")
        if list(self.f_grid) != sorted(set(self.f_grid)):
            raise ValueError("f_grid must be strictly increasing")
        for f in self.f_grid:
            if clause_count(f, self.n) < 1:
                raise ValueError(f"f={f} gives no clauses at n={self.n}")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")

    @property
    def clause_counts(self) -> list[int]:
        return [clause_count(f, self.n) for f in self.f_grid]

    def quick(self) -> "ExperimentConfig":
        return replace(self, instances_per_f=20, interpolation_points=25)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["f_grid"] = list(self.f_grid)
        d["window"] = None if self.window is None else list(self.window)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def digest(self) -> str:
        """Hash of everything that affects results (worker count excluded)."""
        d = self.to_dict()
        d.pop("jobs")
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:16]


@dataclass
class InstanceRecord:
    n: int
    m: int
    seed: int
    config_hash: str
    f_index: int | None = None
    instance_index: int | None = None
    q_max: float = float("nan")
    s_at_max: float | None = None
    flagged: bool = True
    q_of_s: list = field(default_factory=list)
    valid_of_s: list = field(default_factory=list)
    flag_of_s: list = field(default_factory=list)
    dpll_decisions: int | None = None
    dpll_propagations: int | None = None
    satisfiable: bool | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def run_instance(n: int, m: int, seed: int, config: ExperimentConfig,
                 f_index: int | None = None, instance_index: int | None = None) -> InstanceRecord:
    """Generate one formula, sweep its AQC spectrum, fit every point and run DPLL.

    Failures are caught and stored in ``error`` so an ensemble keeps going.
    """
    rec = InstanceRecord(n, m, seed, config.digest(), f_index, instance_index)
    try:
        formula = generate_instance(n, m, seed)
        result = dpll_solve(formula)
        rec.dpll_decisions = result.dpll_decisions
        rec.dpll_propagations = result.dpll_propagations
        rec.satisfiable = result.satisfiable
        spectra = sweep(build_system(formula), config.interpolation_points)
        best = max_brody(spectra, config.poly_degree, config.edge_trim_fraction, config.min_sample,
                         config.max_degenerate_fraction, config.window, config.q_upper)
    except (ArithmeticError, ValueError) as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
        return rec
    rec.q_max = best.q_max
    rec.s_at_max = best.s_at_max
    rec.flagged = best.flagged
    rec.q_of_s = [fit.q for fit in best.fits]
    rec.valid_of_s = [fit.valid for fit in best.fits]
    rec.flag_of_s = [fit.flag for fit in best.fits]
    return rec


def _run_task(args):
    return run_instance(*args)


@dataclass(frozen=True)
class CurveRecord:
    f: float
    m: int
    mean_q_max: float
    stderr_q_max: float
    median_dpll: float
    sat_fraction: float
    count: int


CSV_HEADER = ["f", "m", "mean_q_max", "stderr_q_max", "median_dpll", "sat_fraction", "count"]


@dataclass(frozen=True)
class ComplexityCurve:
    records: tuple[CurveRecord, ...]

    def __len__(self):
        return len(self.records)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.records:
            writer.writerow([repr(r.f), r.m, repr(r.mean_q_max), repr(r.stderr_q_max),
                             repr(r.median_dpll), repr(r.sat_fraction), r.count])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ComplexityCurve":
        rows = list(csv.DictReader(io.StringIO(text)))
        if rows and list(rows[0]) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {list(rows[0])}")
        return cls(tuple(
            CurveRecord(float(r["f"]), int(r["m"]), float(r["mean_q_max"]), float(r["stderr_q_max"]),
                        float(r["median_dpll"]), float(r["sat_fraction"]), int(r["count"]))
            for r in rows))


def _aggregate(f_index: int, n: int, m: int, records: list[InstanceRecord], include_invalid: bool) -> CurveRecord:
    done = [r for r in records if r.ok]
    if not done:
        raise ExperimentError(f"all {len(records)} instances failed at f={m / n} (f_index={f_index})")
    q = np.array([r.q_max for r in done if include_invalid or not r.flagged])
    mean = float(q.mean()) if q.size else float("nan")
    stderr = float(q.std(ddof=1) / math.sqrt(q.size)) if q.size > 1 else 0.0
    cost = float(np.median([r.dpll_decisions for r in done]))
    sat = float(np.mean([r.satisfiable for r in done]))
    return CurveRecord(m / n, m, mean, stderr, cost, sat, int(q.size))


def run_experiment(config: ExperimentConfig, archive: str | Path | None = None) -> ComplexityCurve:
    """Run every (f, instance) pair and reduce to one curve record per f.

    ``archive`` receives one JSON line per instance, in (f, instance) order.
    """
    tasks = [
        (config.n, m, child_seed(config.seed, fi, k), config, fi, k)
        for fi, m in enumerate(config.clause_counts)
        for k in range(config.instances_per_f)
    ]
    if config.jobs == 1:
        results = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=4))

    for r in results:
        if not r.ok:
            log.warning("instance failed: n=%d m=%d seed=%d: %s", r.n, r.m, r.seed, r.error)
    if archive is not None:
        Path(archive).write_text("".join(r.to_json() + "\n" for r in results))

    per_f = config.instances_per_f
    curve = [
        _aggregate(fi, config.n, m, results[fi * per_f:(fi + 1) * per_f], config.include_invalid)
        for fi, m in enumerate(config.clause_counts)
    ]
    return ComplexityCurve(tuple(curve))


@dataclass(frozen=True)
class BaselineRecord:
    n: int
    f: float
    m: int
    median_dpll_decisions: float
    sat_fraction: float
    instances: int


def run_classical_baseline(n_list, f_grid, instances: int = 200, seed: int = 0) -> list[BaselineRecord]:
    """Median DPLL node count and satisfiable fraction for each (n, f)."""
    out = []
    for n in n_list:
        for fi, f in enumerate(f_grid):
            m = clause_count(f, n)
            costs, sat = [], []
            for k in range(instances):
                res = dpll_solve(generate_instance(n, m, child_seed(seed, n, fi, k)))
                costs.append(res.dpll_decisions)
                sat.append(res.satisfiable)
            out.append(BaselineRecord(n, m / n, m, float(np.median(costs)), float(np.mean(sat)), instances))
    return out
