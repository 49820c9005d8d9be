"""
Autoregressive comparison filter.

The trend is the in-sample OLS fitted value of an AR(p) regression with an
intercept; the cycle is the regression residual. In ``projection`` mode the
target is ``y[t+h]`` and the regressors are ``y[t], ..., y[t-p+1]``, which
for ``h=1`` coincides with the one-step autoregression.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ParameterError, SampleSizeError, SingularDesignError
from .hp import FilterResult, as_series

DEFAULT_ORDER = {"quarterly": 4, "monthly": 12}


@dataclass(frozen=True)
class ARSpec:
    p: int = 4
    h: int = 1
    mode: Literal["one_step", "projection"] = "one_step"

    def __post_init__(self):
        if self.p < 1 or self.h < 1:
            raise ParameterError(f"need p >= 1 and h >= 1, got p={self.p}, h={self.h}")
        if self.mode not in ("one_step", "projection"):
            raise ParameterError(f"unknown AR mode {self.mode!r}")
        if self.mode == "one_step" and self.h != 1:
            raise ParameterError("one_step mode implies h=1; use projection for h > 1")

    @classmethod
    def for_frequency(cls, frequency: str, **kwargs) -> "ARSpec":
        try:
            return cls(p=DEFAULT_ORDER[frequency], **kwargs)
        except KeyError:
            raise ParameterError(f"no default AR order for frequency {frequency!r}") from None

    @property
    def offset(self) -> int:
        """Number of leading positions without a fitted value."""
        return self.p + self.h - 1


@dataclass(frozen=True)
class ARCoefficients:
    intercept: float
    slopes: np.ndarray  # slopes[j] multiplies the (j+1)-th most recent regressor
    spec: ARSpec

    @property
    def params(self) -> np.ndarray:
        return np.concatenate([[self.intercept], self.slopes])


def design(y: np.ndarray, spec: ARSpec) -> tuple[np.ndarray, np.ndarray]:
    """Regressor matrix (with intercept column) and target vector."""
    n, p, off = y.size, spec.p, spec.offset
    rows = n - off
    x = np.ones((rows, p + 1))
    for j in range(p):
        # column j+1 holds y[t - h - j] for target index t = off..n-1
        start = off - spec.h - j
        x[:, j + 1] = y[start : start + rows]
    return x, y[off:]


def ar_fit(y, spec: ARSpec = ARSpec()) -> ARCoefficients:
    y = as_series(y, min_length=1)
    rows = y.size - spec.offset
    if rows < spec.p + 2:
        raise SampleSizeError(
            f"effective sample {rows} < p + 2 = {spec.p + 2} for AR({spec.p}), h={spec.h}"
        )
    x, target = design(y, spec)
    rank = np.linalg.matrix_rank(x)
    if rank < x.shape[1]:
        raise SingularDesignError(f"AR design has rank {rank} < {x.shape[1]}")
    beta, *_ = np.linalg.lstsq(x, target, rcond=None)
    return ARCoefficients(intercept=float(beta[0]), slopes=beta[1:], spec=spec)


def ar_fitted(y, coefs: ARCoefficients) -> np.ndarray:
    """Fitted values under fixed coefficients; NaN where lags are unavailable."""
    y = np.asarray(y, dtype=float)
    x, _ = design(y, coefs.spec)
    out = np.full(y.size, np.nan)
    out[coefs.spec.offset :] = x @ coefs.params
    return out


def ar_trend_cycle(y, spec: ARSpec = ARSpec()) -> FilterResult:
    y = as_series(y, min_length=1)
    coefs = ar_fit(y, spec)
    trend = ar_fitted(y, coefs)
    label = f"AR({spec.p})" if spec.mode == "one_step" else f"AR({spec.p},h={spec.h})"
    return FilterResult(trend=trend, cycle=y - trend, method=label, iterations=1)
