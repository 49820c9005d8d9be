"""
Panel pipeline for FRED-QD/FRED-MD style datasets.

Every series is filtered on its own usable range, the cycles are scaled to
unit sample variance, selected series are sign-flipped so that all cycles
fall in recessions, and the cross-sectional mean forms an aggregate
cyclical index. The index's persistence is assessed with a
heteroskedasticity-robust autocorrelation test.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import pandas as pd
from scipy import stats

from .ar import ARSpec, ar_trend_cycle
from .boosting import BoostConfig, boosted_hp, boosted_hp_bic, default_lambda
from .errors import DataError, DegenerateInputError, FilterError, FormatError, ParameterError
from .hp import hp_smooth

logger = logging.getLogger(__name__)

DEFAULT_FLIPS = {
    "quarterly": tuple(range(58, 73)) + (197,) + tuple(range(158, 163)),
    "monthly": tuple(range(25, 32)) + tuple(range(70, 74)),
}
DEFAULT_K = {"quarterly": 6, "monthly": 18}
FILTER_METHODS = ("hp", "2hp", "bhp", "bhp_fixed", "ar")


@dataclass
class PanelSeries:
    id: int
    name: str
    values: np.ndarray
    usable_range: tuple[int, int]  # half-open [start, stop)
    excluded: str | None = None


@dataclass
class PanelDataset:
    dates: pd.DatetimeIndex
    frequency: str
    series: list[PanelSeries]

    def __post_init__(self):
        ids = [s.id for s in self.series]
        if len(set(ids)) != len(ids):
            raise DataError("series ids must be unique")

    @property
    def usable(self) -> list[PanelSeries]:
        return [s for s in self.series if s.excluded is None]

    @property
    def excluded(self) -> dict[int, str]:
        return {s.id: s.excluded for s in self.series if s.excluded is not None}

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, frequency: str, interpolate_interior: bool = False):
        """Build from a date-indexed frame; columns become series 1..N in order."""
        series = [
            _make_series(i, str(name), frame[name].to_numpy(dtype=float), interpolate_interior)
            for i, name in enumerate(frame.columns, start=1)
        ]
        index = frame.index if isinstance(frame.index, pd.DatetimeIndex) else pd.Index(frame.index)
        return cls(dates=index, frequency=frequency, series=series)


def _make_series(sid: int, name: str, values: np.ndarray, interpolate: bool) -> PanelSeries:
    ok = np.flatnonzero(np.isfinite(values))
    if ok.size == 0:
        logger.warning("series %d (%s) excluded: no observations", sid, name)
        return PanelSeries(sid, name, values, (0, 0), "no observations")
    start, stop = int(ok[0]), int(ok[-1]) + 1
    gaps = np.flatnonzero(~np.isfinite(values[start:stop]))
    reason = None
    if gaps.size:
        if interpolate:
            inner = values[start:stop].copy()
            idx = np.arange(inner.size)
            good = np.isfinite(inner)
            inner[~good] = np.interp(idx[~good], idx[good], inner[good])
            values = values.copy()
            values[start:stop] = inner
        else:
            reason = f"{gaps.size} interior missing values"
            logger.warning("series %d (%s) excluded: %s", sid, name, reason)
    return PanelSeries(sid, name, values, (start, stop), reason)


def infer_frequency(dates: pd.Index) -> str:
    if len(dates) < 2 or not isinstance(dates, pd.DatetimeIndex):
        return "custom"
    step = float(np.median(np.diff(dates.values).astype("timedelta64[D]").astype(float)))
    if 85 <= step <= 95:
        return "quarterly"
    if 27 <= step <= 32:
        return "monthly"
    if 360 <= step <= 370:
        return "annual"
    return "custom"


def _parse_float(text) -> float:
    # python's float() round-trips exactly, unlike the vectorized pandas parser
    if not isinstance(text, str):
        return np.nan
    try:
        return float(text)
    except ValueError:
        return np.nan


def load_panel(
    path,
    date_column: int | str = 0,
    skip_metadata_rows: int = 0,
    frequency: str | None = None,
    interpolate_interior: bool = False,
) -> PanelDataset:
    """Read a wide CSV: header row, optional metadata rows, one column per series.

    The date column may also hold plain integers (a time index). Lines
    starting with ``#`` are treated as comments.
    Missing values are empty cells or ``NA``. Leading and trailing gaps are
    trimmed into each series' usable range; interior gaps exclude the series
    unless ``interpolate_interior`` is set.
    """
    try:
        raw = pd.read_csv(
            path,
            skiprows=range(1, 1 + skip_metadata_rows),
            dtype=str,
            keep_default_na=False,
            comment="#",
        )
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise FormatError(f"cannot parse {path}: {exc}") from exc
    if raw.shape[1] < 2:
        raise FormatError(f"{path}: need a date column and at least one series column")

    date_name = raw.columns[date_column] if isinstance(date_column, int) else date_column
    if date_name not in raw.columns:
        raise FormatError(f"{path}: date column {date_column!r} not found")
    first_data_line = 2 + skip_metadata_rows

    cells = raw.drop(columns=[date_name]).apply(lambda col: col.str.strip())
    date_text = raw[date_name].str.strip()
    blank = (date_text == "") & cells.isin(["", "NA"]).all(axis=1)
    cells, date_text = cells[~blank], date_text[~blank]

    if date_text.str.fullmatch(r"-?\d+").all():
        # plain integer time index, e.g. simulator output
        dates = pd.Series(date_text.astype(int).to_numpy(), index=date_text.index)
    else:
        dates = pd.to_datetime(date_text, errors="coerce")
    bad = np.flatnonzero(dates.isna().to_numpy())
    if bad.size:
        line = first_data_line + int(date_text.index[bad[0]])
        raise FormatError(
            f"{path}: unparseable date {date_text.iloc[bad[0]]!r} at line {line}, column {date_name!r}"
        )

    missing = cells.isin(["", "NA", "NaN", "nan"])
    numeric = cells.mask(missing).apply(lambda col: col.map(_parse_float))
    bad_cells = numeric.isna() & ~missing
    if bad_cells.to_numpy().any():
        r, c = map(int, np.argwhere(bad_cells.to_numpy())[0])
        line = first_data_line + int(cells.index[r])
        raise FormatError(
            f"{path}: non-numeric value {cells.iat[r, c]!r} at line {line}, column {cells.columns[c]!r}"
        )

    frame = numeric.astype(float)
    frame.index = pd.Index(dates.to_numpy()) if dates.dtype.kind == "i" else pd.DatetimeIndex(dates)
    freq = frequency or infer_frequency(frame.index)
    return PanelDataset.from_frame(frame, freq, interpolate_interior)


# --------------------------------------------------------------------------
# filtering and standardization


@dataclass
class CycleMatrix:
    """Per-series filter output on the panel's date axis (NaN outside coverage)."""

    dates: pd.DatetimeIndex
    ids: list[int]
    names: list[str]
    raw: np.ndarray
    trend: np.ndarray
    cycle: np.ndarray
    method: str
    lam: float | None = None
    m_hat: dict[int, int] = field(default_factory=dict)
    excluded: dict[int, str] = field(default_factory=dict)
    standardized: np.ndarray | None = None
    flipped: tuple[int, ...] = ()

    def column(self, sid: int) -> int:
        return self.ids.index(sid)


def _filter_one(y: np.ndarray, method: str, lam: float, m: int | None, m_max: int, p: int):
    if method == "hp":
        return hp_smooth(y, lam)
    if method == "2hp":
        return boosted_hp(y, lam, 2)
    if method == "bhp":
        return boosted_hp_bic(y, BoostConfig(lam=lam, m_max=m_max))
    if method == "bhp_fixed":
        return boosted_hp(y, lam, m)
    return ar_trend_cycle(y, ARSpec(p=p))


def filter_panel(
    panel: PanelDataset,
    method: str = "bhp",
    lam: float | None = None,
    m: int | None = None,
    m_max: int = 200,
    p: int | None = None,
) -> CycleMatrix:
    """Filter each usable series on its own range with one of ``hp``, ``2hp``,
    ``bhp`` (BIC stopping), ``bhp_fixed`` (needs ``m``) or ``ar``."""
    if method not in FILTER_METHODS:
        raise ParameterError(f"unknown method {method!r}; choose from {FILTER_METHODS}")
    if method == "bhp_fixed" and (m is None or m < 1):
        raise ParameterError("bhp_fixed needs m >= 1")
    if method == "ar":
        p = p or ARSpec.for_frequency(panel.frequency).p
        lam = None
    else:
        lam = float(lam) if lam is not None else default_lambda(panel.frequency)

    shape = (len(panel.dates), len(panel.series))
    trend, cycle = np.full(shape, np.nan), np.full(shape, np.nan)
    raw = np.column_stack([s.values for s in panel.series]) if panel.series else np.empty(shape)
    m_hat, excluded = {}, dict(panel.excluded)
    for j, s in enumerate(panel.series):
        if s.excluded is not None:
            continue
        a, b = s.usable_range
        try:
            res = _filter_one(s.values[a:b], method, lam, m, m_max, p)
        except FilterError as exc:
            excluded[s.id] = f"filter failed: {exc}"
            logger.warning("series %d (%s) excluded: %s", s.id, s.name, exc)
            continue
        trend[a:b, j], cycle[a:b, j] = res.trend, res.cycle
        if method == "bhp":
            m_hat[s.id] = res.iterations
    return CycleMatrix(
        dates=panel.dates,
        ids=[s.id for s in panel.series],
        names=[s.name for s in panel.series],
        raw=raw,
        trend=trend,
        cycle=cycle,
        method=method,
        lam=lam,
        m_hat=m_hat,
        excluded=excluded,
    )


def standardize_and_flip(cycles: CycleMatrix, flip_ids: Iterable[int] = ()) -> CycleMatrix:
    """Scale every cycle to unit sample variance (divisor ``len - 1``), then
    negate the columns whose id is in ``flip_ids``."""
    flips = set(flip_ids)
    out = np.full_like(cycles.cycle, np.nan)
    excluded = dict(cycles.excluded)
    for j, sid in enumerate(cycles.ids):
        if sid in excluded:
            continue
        col = cycles.cycle[:, j]
        ok = np.isfinite(col)
        sd = float(np.std(col[ok], ddof=1)) if ok.sum() > 1 else 0.0
        if not sd > 0:
            excluded[sid] = "zero-variance cycle"
            logger.warning("series %d excluded: zero-variance cycle", sid)
            continue
        out[ok, j] = col[ok] / sd
        if sid in flips:
            out[ok, j] = -out[ok, j]
    applied = tuple(sorted(s for s in flips if s in cycles.ids and s not in excluded))
    return dataclasses.replace(cycles, standardized=out, excluded=excluded, flipped=applied)


@dataclass
class AggregateIndex:
    values: np.ndarray
    coverage: np.ndarray
    method: str
    dates: pd.DatetimeIndex | None = None

    def to_frame(self) -> pd.DataFrame:
        dates = self.dates if self.dates is not None else np.arange(1, self.values.size + 1)
        return pd.DataFrame({"date": dates, "index": self.values, "coverage": self.coverage})


def aggregate_index(cycles: CycleMatrix | np.ndarray, method: str | None = None) -> AggregateIndex:
    """Cross-sectional mean of the available (standardized) cycles at each date."""
    if isinstance(cycles, CycleMatrix):
        mat = cycles.standardized if cycles.standardized is not None else cycles.cycle
        keep = [j for j, sid in enumerate(cycles.ids) if sid not in cycles.excluded]
        mat = mat[:, keep]
        dates, label = cycles.dates, method or cycles.method
    else:
        mat = np.asarray(cycles, dtype=float)
        if mat.ndim == 1:
            mat = mat[:, None]
        dates, label = None, method or "custom"
    if mat.shape[1] == 0:
        raise DataError("no usable series to aggregate")
    ok = np.isfinite(mat)
    coverage = ok.sum(axis=1)
    total = np.where(ok, mat, 0.0).sum(axis=1)
    values = np.full(mat.shape[0], np.nan)
    np.divide(total, coverage, out=values, where=coverage > 0)
    return AggregateIndex(values=values, coverage=coverage, method=label, dates=dates)


def tidy_frame(cycles: CycleMatrix) -> pd.DataFrame:
    """Long format: date, series_id, trend, cycle, standardized_cycle."""
    std = cycles.standardized if cycles.standardized is not None else np.full_like(cycles.cycle, np.nan)
    parts = []
    for j, sid in enumerate(cycles.ids):
        ok = np.isfinite(cycles.raw[:, j])
        parts.append(pd.DataFrame({
            "date": cycles.dates[ok],
            "series_id": sid,
            "trend": cycles.trend[ok, j],
            "cycle": cycles.cycle[ok, j],
            "standardized_cycle": std[ok, j],
        }))
    if not parts:
        return pd.DataFrame(columns=["date", "series_id", "trend", "cycle", "standardized_cycle"])
    return pd.concat(parts, ignore_index=True)


# --------------------------------------------------------------------------
# autocorrelation test


@dataclass
class ACTestResult:
    K: int
    t_stats: np.ndarray
    joint_stat: float
    critical_value_5pct: float
    reject: bool
    cumulative_stats: np.ndarray  # Q_k for k = 1..K
    cumulative_critical: np.ndarray  # chi2(k) 5% critical values
    statistic: str = "sum of squared robust t-ratios (no cross-lag correction)"

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "t_stats": self.t_stats.tolist(),
            "joint_stat": self.joint_stat,
            "critical_value_5pct": self.critical_value_5pct,
            "reject": self.reject,
            "cumulative_stats": self.cumulative_stats.tolist(),
            "cumulative_critical": self.cumulative_critical.tolist(),
            "statistic": self.statistic,
        }


def robust_t_stats(z, K: int) -> np.ndarray:
    """``t_k = sum e_t e_{t-k} / sqrt(sum e_t^2 e_{t-k}^2)`` with ``e = z - mean(z)``."""
    e = np.asarray(z, dtype=float)
    e = e - e.mean()
    out = np.empty(K)
    for k in range(1, K + 1):
        prod = e[k:] * e[:-k]
        denom = np.sqrt(prod @ prod)
        out[k - 1] = prod.sum() / denom if denom > 0 else 0.0
    return out


def robust_ac_test(z, K: int) -> ACTestResult:
    z = np.asarray(z, dtype=float)
    if K < 1:
        raise ParameterError(f"K must be >= 1, got {K}")
    if z.ndim != 1 or not np.all(np.isfinite(z)):
        raise DataError("autocorrelation test needs a finite 1-d series")
    if z.size <= K + 1:
        raise DataError(f"series of length {z.size} too short for K={K}")
    if z.size < 10 * K:
        logger.warning("length %d < 10K=%d; test may be unreliable", z.size, 10 * K)
    if not np.var(z) > 0:
        raise DegenerateInputError("zero-variance series")
    t = robust_t_stats(z, K)
    cum = np.cumsum(t**2)
    crit = stats.chi2.ppf(0.95, np.arange(1, K + 1))
    return ACTestResult(
        K=K,
        t_stats=t,
        joint_stat=float(cum[-1]),
        critical_value_5pct=float(crit[-1]),
        reject=bool(cum[-1] > crit[-1]),
        cumulative_stats=cum,
        cumulative_critical=crit,
    )


def trim_missing(values: Sequence[float]) -> np.ndarray:
    """Drop leading/trailing NaN; interior NaN is a data error."""
    v = np.asarray(values, dtype=float)
    ok = np.flatnonzero(np.isfinite(v))
    if ok.size == 0:
        raise DataError("series has no finite values")
    v = v[ok[0] : ok[-1] + 1]
    if not np.all(np.isfinite(v)):
        raise DataError("series has interior missing values")
    return v
