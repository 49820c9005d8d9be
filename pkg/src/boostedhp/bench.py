"""
Monte-Carlo comparison of trend estimators on the simulated designs.

Each replication ``r`` of a cell draws from the substream
``base_seed ^ r`` so results do not depend on execution order or on the
number of worker processes. All methods in a cell see the same draw.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from . import SCHEMA_VERSION
from .ar import ARSpec, ar_trend_cycle
from .boosting import BoostConfig, boosted_hp, boosted_hp_bic, default_lambda
from .dgp import RNG_ALGORITHM, DGPSpec, gen_dgp, substream_seed
from .errors import FilterError, ParameterError, WindowError
from .hp import hp_smooth

logger = logging.getLogger(__name__)

APPENDIX_MU = 1.6e-5
UNRELIABLE_FAILURE_RATE = 0.01
METHOD_NAMES = ("HP", "2HP", "bHP", "AR", "oracle")


def trend_mse(f_hat, f, skip_missing: bool = False) -> float:
    """Trimmed trend MSE over positions 5..n-4 (1-based).

    With ``skip_missing`` NaN estimates inside the window are dropped and the
    divisor shrinks to the number of scored positions.
    """
    f_hat = np.asarray(f_hat, dtype=float)
    f = np.asarray(f, dtype=float)
    if f_hat.shape != f.shape or f.ndim != 1:
        raise WindowError(f"shape mismatch {f_hat.shape} vs {f.shape}")
    n = f.size
    if n < 9:
        raise WindowError(f"need n >= 9 for the trimmed window, got {n}")
    d = f_hat[4 : n - 4] - f[4 : n - 4]
    ok = np.isfinite(d)
    if not ok.all():
        if not skip_missing or not ok.any():
            raise WindowError(f"{int((~ok).sum())} undefined estimates inside the MSE window")
        d = d[ok]
    return float(d @ d) / d.size


@dataclass(frozen=True)
class MethodSpec:
    name: str
    m_max: int = 200
    p: int | None = None

    def __post_init__(self):
        if self.name not in METHOD_NAMES:
            raise ParameterError(f"unknown method {self.name!r}; choose from {METHOD_NAMES}")

    @property
    def label(self) -> str:
        return self.name


@dataclass(frozen=True)
class BenchConfig:
    dgps: tuple[DGPSpec, ...]
    sample_sizes: dict[str, tuple[int, ...]]
    methods: tuple[MethodSpec, ...] = tuple(MethodSpec(m) for m in ("HP", "2HP", "bHP", "AR"))
    replications: int = 1000
    lambda_rule: Literal["fixed", "scaled"] = "fixed"
    mu: float = APPENDIX_MU
    base_seed: int = 0

    def __post_init__(self):
        if self.replications < 2:
            raise ParameterError("replications must be >= 2 for a Monte-Carlo standard error")
        if self.lambda_rule not in ("fixed", "scaled"):
            raise ParameterError(f"unknown lambda rule {self.lambda_rule!r}")
        for spec in self.dgps:
            if spec.frequency not in self.sample_sizes:
                raise ParameterError(f"no sample sizes configured for {spec.frequency}")

    def lam(self, frequency: str, n: int) -> float:
        if self.lambda_rule == "scaled":
            return self.mu * float(n) ** 4
        return default_lambda(frequency)

    def cells(self) -> list[tuple[DGPSpec, int]]:
        return [
            (spec, n) for spec in self.dgps for n in self.sample_sizes[spec.frequency]
        ]

    def to_dict(self) -> dict:
        return {
            "dgps": [dataclasses.asdict(d) for d in self.dgps],
            "sample_sizes": {k: list(v) for k, v in self.sample_sizes.items()},
            "methods": [dataclasses.asdict(m) for m in self.methods],
            "replications": self.replications,
            "lambda_rule": self.lambda_rule,
            "mu": self.mu,
            "base_seed": self.base_seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BenchConfig":
        methods = []
        for m in d.get("methods", ["HP", "2HP", "bHP", "AR"]):
            methods.append(MethodSpec(m) if isinstance(m, str) else MethodSpec(**m))
        dgps = []
        for g in d["dgps"]:
            g = dict(g)
            cs = g.pop("c_values", None)
            if cs is None:
                dgps.append(DGPSpec(**g))
            else:
                dgps.extend(DGPSpec(**g, c=c) for c in cs)
        sizes = d["sample_sizes"]
        if not isinstance(sizes, dict):
            sizes = {s.frequency: sizes for s in dgps}
        return cls(
            dgps=tuple(dgps),
            sample_sizes={k: tuple(int(x) for x in v) for k, v in sizes.items()},
            methods=tuple(methods),
            replications=int(d.get("replications", 1000)),
            lambda_rule=d.get("lambda_rule", "fixed"),
            mu=float(d.get("mu", APPENDIX_MU)),
            base_seed=int(d.get("base_seed", 0)),
        )


def estimate_trend(method: MethodSpec, y: np.ndarray, f: np.ndarray, lam: float, frequency: str):
    if method.name == "HP":
        return hp_smooth(y, lam).trend
    if method.name == "2HP":
        return boosted_hp(y, lam, 2).trend
    if method.name == "bHP":
        return boosted_hp_bic(y, BoostConfig(lam=lam, m_max=method.m_max)).trend
    if method.name == "AR":
        spec = ARSpec(p=method.p) if method.p else ARSpec.for_frequency(frequency)
        return ar_trend_cycle(y, spec).trend
    return f.copy()  # oracle


def replication_mse(
    template: DGPSpec,
    n: int,
    replication: int,
    methods: Sequence[MethodSpec],
    lam: float,
    base_seed: int,
) -> np.ndarray:
    """Trend MSE of every method on one draw; NaN marks a failed method."""
    spec = dataclasses.replace(template, n=n, seed=substream_seed(base_seed, replication))
    draw = gen_dgp(spec)
    out = np.full(len(methods), np.nan)
    for i, method in enumerate(methods):
        try:
            f_hat = estimate_trend(method, draw.y, draw.f, lam, spec.frequency)
            out[i] = trend_mse(f_hat, draw.f, skip_missing=method.name == "AR")
        except FilterError as exc:
            logger.info("replication %d of %s failed for %s: %s", replication, spec, method.name, exc)
    return out


def _run_chunk(args) -> np.ndarray:
    template, n, reps, methods, lam, base_seed = args
    return np.vstack([replication_mse(template, n, r, methods, lam, base_seed) for r in reps])


@dataclass
class CellStats:
    mean: float
    se: float
    count: int
    failures: int
    unreliable: bool


@dataclass
class BenchReport:
    config: BenchConfig
    cells: dict[tuple, CellStats]  # (dgp id, frequency, n, c, method) -> stats
    lambdas: dict[tuple, float]  # (frequency, n) -> lambda
    metadata: dict = field(default_factory=dict)

    @property
    def any_unreliable(self) -> bool:
        return any(s.unreliable for s in self.cells.values())

    def get(self, dgp: int, n: int, method: str, c: float | None = None, frequency: str | None = None):
        for (i, freq, nn, cc, mm), stats in self.cells.items():
            if (i, nn, cc, mm) == (dgp, n, c, method) and frequency in (None, freq):
                return stats
        raise KeyError((dgp, frequency, n, c, method))


def _summarize(mse: np.ndarray) -> CellStats:
    ok = mse[np.isfinite(mse)]
    failures = mse.size - ok.size
    mean = float(np.mean(ok)) if ok.size else float("nan")
    se = float(np.std(ok, ddof=1) / np.sqrt(ok.size)) if ok.size > 1 else float("nan")
    return CellStats(
        mean=mean,
        se=se,
        count=int(ok.size),
        failures=int(failures),
        unreliable=failures > UNRELIABLE_FAILURE_RATE * mse.size,
    )


def run_experiment(config: BenchConfig, workers: int = 1, chunk_size: int = 50) -> BenchReport:
    start = time.perf_counter()
    reps = list(range(config.replications))
    chunks = [reps[i : i + chunk_size] for i in range(0, len(reps), chunk_size)]
    tasks, index = [], []
    for cell_no, (spec, n) in enumerate(config.cells()):
        lam = config.lam(spec.frequency, n)
        for chunk in chunks:
            tasks.append((spec, n, chunk, config.methods, lam, config.base_seed))
            index.append(cell_no)

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_chunk, tasks))
    else:
        results = [_run_chunk(t) for t in tasks]

    cells, lambdas = {}, {}
    for cell_no, (spec, n) in enumerate(config.cells()):
        mse = np.vstack([r for r, i in zip(results, index) if i == cell_no])
        lambdas[(spec.frequency, n)] = config.lam(spec.frequency, n)
        for j, method in enumerate(config.methods):
            stats = _summarize(mse[:, j])
            if stats.unreliable:
                logger.warning("cell %s n=%d %s unreliable: %d failures", spec, n, method.name, stats.failures)
            cells[(spec.id, spec.frequency, n, spec.c, method.label)] = stats

    metadata = {
        "schema_version": SCHEMA_VERSION,
        "rng": RNG_ALGORITHM,
        "substream": "seed = base_seed XOR replication",
        "mse_window": "t=5..n-4, divisor n-8; AR skips undefined start-up positions and divides by the scored count",
        "workers": workers,
        "wall_time_s": round(time.perf_counter() - start, 3),
    }
    return BenchReport(config=config, cells=cells, lambdas=lambdas, metadata=metadata)


# --------------------------------------------------------------------------
# rendering


def _fmt(x: float) -> str:
    return "nan" if not np.isfinite(x) else f"{x:.6f}"


def _csv(report: BenchReport) -> str:
    buf = io.StringIO()
    buf.write(f"# schema_version={SCHEMA_VERSION}\n")
    buf.write("# config=" + json.dumps(report.config.to_dict(), sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["dgp", "frequency", "n", "c", "method", "lambda", "mean_mse", "mc_se", "replications", "failures", "unreliable"]
    )
    for (dgp, freq, n, c, method), s in report.cells.items():
        writer.writerow(
            [dgp, freq, n, "" if c is None else c, method, repr(report.lambdas[(freq, n)]),
             _fmt(s.mean), _fmt(s.se), s.count, s.failures, int(s.unreliable)]
        )
    return buf.getvalue()


def _markdown(report: BenchReport) -> str:
    """Reference-table layout: one panel per frequency placed side by side, with
    method columns repeated for each localizing coefficient."""
    methods = [m.label for m in report.config.methods]
    freqs = list(dict.fromkeys(f for (_, f, _, _, _) in report.cells))
    panels = []
    for freq in freqs:
        keys = [k for k in report.cells if k[1] == freq]
        cs = list(dict.fromkeys(k[3] for k in keys))
        rows = list(dict.fromkeys((k[0], k[2]) for k in keys))
        header = ["DGP", "n"] + [
            m if c is None else f"{m} (c={c:g})" for c in cs for m in methods
        ]
        body = []
        prev = None
        for dgp, n in rows:
            line = [str(dgp) if dgp != prev else "", str(n)]
            prev = dgp
            for c in cs:
                for m in methods:
                    s = report.cells.get((dgp, freq, n, c, m))
                    line.append("" if s is None else f"{s.mean:.2f}")
            body.append(line)
        panels.append((freq, header, body))

    if not panels:
        header = ["DGP", "n"] + methods
        return "| " + " | ".join(header) + " |\n|" + "---|" * len(header) + "\n"

    depth = max(len(b) for _, _, b in panels)
    header, caption = [], []
    for freq, h, _ in panels:
        header += h
        caption += [f"{freq.capitalize()} data"] + [""] * (len(h) - 1)
    lines = []
    if len(panels) > 1:
        lines.append("| " + " | ".join(caption) + " |")
        lines.append("|" + "---|" * len(caption))
        lines.append("| " + " | ".join(header) + " |")
    else:
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "---|" * len(header))
    for i in range(depth):
        row = []
        for _, h, b in panels:
            row += b[i] if i < len(b) else [""] * len(h)
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def _json(report: BenchReport) -> str:
    cells = [
        {"dgp": d, "frequency": f, "n": n, "c": c, "method": m, "lambda": report.lambdas[(f, n)],
         **dataclasses.asdict(s)}
        for (d, f, n, c, m), s in report.cells.items()
    ]
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": report.config.to_dict(),
        "metadata": report.metadata,
        "cells": cells,
    }
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=True) + "\n"


def render_report(report: BenchReport, format: Literal["csv", "markdown_table", "json"] = "csv") -> str:
    if format == "csv":
        return _csv(report)
    if format == "markdown_table":
        return _markdown(report)
    if format == "json":
        return _json(report)
    raise ParameterError(f"unknown report format {format!r}")
