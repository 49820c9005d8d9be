"""
Exact finite-sample Hodrick-Prescott smoothing.

The trend solves ``(I + lam * P) f = y`` where ``P = K'K`` and ``K`` is the
``(n-2) x n`` second-difference matrix with stencil ``(1, -2, 1)``. ``P`` is
pentadiagonal, so the system is solved with a banded Cholesky factorization
that is computed once per ``(n, lam)`` and cached.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import linalg

from .errors import (
    DataError,
    DimensionError,
    InvalidLengthError,
    NumericalError,
    ParameterError,
)

MIN_LENGTH = 5
ZERO_EIG_RTOL = 1e-10


@dataclass
class FilterResult:
    """Trend/cycle decomposition returned by every filter in the package.

    ``cycle`` and ``trend`` may hold NaN at positions a method cannot
    estimate (the AR filter's start-up lags).
    """

    trend: np.ndarray
    cycle: np.ndarray
    method: str
    iterations: int = 1
    lam: float | None = None
    ic_path: np.ndarray | None = None
    flags: tuple[str, ...] = field(default_factory=tuple)


def as_series(y, min_length: int = MIN_LENGTH) -> np.ndarray:
    """Validate a 1-d finite float series of at least ``min_length`` points."""
    arr = np.asarray(y, dtype=float)
    if arr.ndim != 1:
        raise DimensionError(f"expected a 1-d series, got shape {arr.shape}")
    if arr.size < min_length:
        raise InvalidLengthError(
            f"series length {arr.size} < {min_length}; need at least three second differences"
        )
    if not np.all(np.isfinite(arr)):
        bad = np.flatnonzero(~np.isfinite(arr))
        raise DataError(f"non-finite values at positions {bad[:10].tolist()}")
    return arr


# --------------------------------------------------------------------------
# penalty operator


@dataclass(frozen=True, eq=False)
class PenaltyOperator:
    """Symmetric pentadiagonal ``P = K'K`` stored in lower banded form.

    ``bands[0]`` is the main diagonal, ``bands[1]`` the first sub-diagonal
    (last entry padding), ``bands[2]`` the second sub-diagonal.
    """

    n: int
    bands: np.ndarray

    def dense(self) -> np.ndarray:
        n = self.n
        out = np.diag(self.bands[0])
        out += np.diag(self.bands[1, : n - 1], -1) + np.diag(self.bands[1, : n - 1], 1)
        out += np.diag(self.bands[2, : n - 2], -2) + np.diag(self.bands[2, : n - 2], 2)
        return out

    def row(self, i: int) -> np.ndarray:
        """Row ``i`` (0-based) of the dense operator."""
        return self.dense()[i]

    def matvec(self, v) -> np.ndarray:
        """``P v`` evaluated as ``K'(K v)`` so that constants map to exactly 0."""
        v = np.asarray(v, dtype=float)
        if v.shape != (self.n,):
            raise DimensionError(f"expected length {self.n}, got {v.shape}")
        w = v[:-2] - 2.0 * v[1:-1] + v[2:]
        out = np.zeros(self.n)
        out[:-2] += w
        out[1:-1] -= 2.0 * w
        out[2:] += w
        return out


def second_difference_matrix(n: int) -> np.ndarray:
    """Dense ``(n-2) x n`` second-difference map."""
    k = np.zeros((n - 2, n))
    for i in range(n - 2):
        k[i, i : i + 3] = (1.0, -2.0, 1.0)
    return k


@functools.lru_cache(maxsize=128)
def build_penalty_operator(n: int) -> PenaltyOperator:
    if n < MIN_LENGTH:
        raise InvalidLengthError(f"n={n} < {MIN_LENGTH}")
    main = np.full(n, 6.0)
    main[[0, -1]] = 1.0
    main[[1, -2]] = 5.0
    sub1 = np.full(n, -4.0)
    sub1[[0, n - 2]] = -2.0
    sub1[n - 1] = 0.0
    sub2 = np.ones(n)
    sub2[n - 2 :] = 0.0
    bands = np.vstack([main, sub1, sub2])
    bands.setflags(write=False)
    return PenaltyOperator(n=n, bands=bands)


# --------------------------------------------------------------------------
# smoother


@dataclass(frozen=True)
class SmootherSpec:
    lam: float
    n: int

    def __post_init__(self):
        if not np.isfinite(self.lam) or self.lam < 0:
            raise ParameterError(f"lambda must be finite and >= 0, got {self.lam}")
        if self.n < MIN_LENGTH:
            raise InvalidLengthError(f"n={self.n} < {MIN_LENGTH}")


@functools.lru_cache(maxsize=128)
def _factor(n: int, lam: float) -> np.ndarray:
    # lru_cache may compute twice under a race; the result is identical either way
    ab = lam * build_penalty_operator(n).bands  # new array; cached bands stay read-only
    ab[0] += 1.0
    try:
        chol = linalg.cholesky_banded(ab, lower=True, check_finite=False)
    except linalg.LinAlgError as exc:
        raise NumericalError(f"banded Cholesky failed for n={n}, lambda={lam}: {exc}") from exc
    chol.setflags(write=False)
    return chol


def apply_smoother(spec: SmootherSpec, v) -> np.ndarray:
    """Return ``S v`` with ``S = (I + lam P)^{-1}``."""
    v = np.asarray(v, dtype=float)
    if v.shape[0] != spec.n:
        raise DimensionError(f"vector length {v.shape[0]} != smoother length {spec.n}")
    if spec.lam == 0:
        return v.copy()
    return linalg.cho_solve_banded((_factor(spec.n, float(spec.lam)), True), v, check_finite=False)


def apply_residual(spec: SmootherSpec, v) -> np.ndarray:
    """Return ``(I - S) v`` computed as ``S (lam P v)``.

    Avoids the cancellation in ``v - S v``; affine ``v`` maps to zero up to
    rounding in ``P v``.
    """
    v = np.asarray(v, dtype=float)
    if v.shape[0] != spec.n:
        raise DimensionError(f"vector length {v.shape[0]} != smoother length {spec.n}")
    if spec.lam == 0:
        return np.zeros_like(v)
    return apply_smoother(spec, spec.lam * build_penalty_operator(spec.n).matvec(v))


def hp_smooth(y, lam: float) -> FilterResult:
    """Hodrick-Prescott filter.

    Parameters
    ----------
    y : array-like, shape (n,)
        Observed series, ``n >= 5``, all finite.
    lam : float
        Smoothing parameter, ``>= 0``.

    Returns
    -------
    FilterResult
        ``cycle = (I - S) y`` and ``trend = y - cycle``.
    """
    y = as_series(y)
    spec = SmootherSpec(float(lam), y.size)
    cycle = apply_residual(spec, y)
    return FilterResult(trend=y - cycle, cycle=cycle, method="HP", iterations=1, lam=float(lam))


# --------------------------------------------------------------------------
# spectrum and traces


@dataclass(frozen=True)
class PenaltySpectrum:
    n: int
    eigenvalues: np.ndarray


@functools.lru_cache(maxsize=32)
def penalty_spectrum(n: int) -> PenaltySpectrum:
    """Ascending eigenvalues of ``P``; the two null-space values are set to 0."""
    op = build_penalty_operator(n)
    try:
        eig = linalg.eig_banded(op.bands, lower=True, eigvals_only=True, check_finite=False)
    except linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver did not converge for n={n}: {exc}") from exc
    eig = np.sort(eig)
    zero = np.abs(eig) <= ZERO_EIG_RTOL * eig[-1]
    if zero.sum() != 2:
        raise NumericalError(
            f"expected 2 null eigenvalues for n={n}, found {int(zero.sum())}: {eig[:4]}"
        )
    eig[zero] = 0.0
    eig.setflags(write=False)
    return PenaltySpectrum(n=n, eigenvalues=eig)


class SmootherTraces(NamedTuple):
    trace_b: np.ndarray  # tr(B_m) for m = 1..m_max
    trace_resid: float  # tr(I - S)


def residual_eigenvalues(spectrum: PenaltySpectrum, lam: float) -> np.ndarray:
    """Eigenvalues ``lam*mu / (1 + lam*mu)`` of ``I - S``."""
    lm = lam * spectrum.eigenvalues
    return lm / (1.0 + lm)


def smoother_traces(spectrum: PenaltySpectrum, lam: float, m_max: int) -> SmootherTraces:
    """Degrees of freedom of the m-step trend operator ``B_m = I - (I - S)^m``."""
    if not lam > 0:
        raise ParameterError(f"lambda must be > 0 for trace computation, got {lam}")
    if m_max < 1:
        raise ParameterError(f"m_max must be >= 1, got {m_max}")
    r = residual_eigenvalues(spectrum, lam)
    powers = r[None, :] ** np.arange(1, m_max + 1, dtype=float)[:, None]
    trace_b = np.sum(1.0 - powers, axis=1)
    return SmootherTraces(trace_b=trace_b, trace_resid=float(r.sum()))
