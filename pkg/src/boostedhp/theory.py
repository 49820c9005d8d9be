"""
Finite-sample checks of the HP residual operator's shrinkage behaviour.

With ``lam = mu * n**4`` the residual operator ``I - S`` acts, away from the
sample boundaries, like multiplication by a scalar on smooth basis functions:

* trigonometric ``sqrt(2) sin(t / (n sqrt(l_k)))`` and its cosine twin, with
  ``l_k = 1 / ((k - 1/2) pi)^2``, are scaled by ``mu / (mu + l_k^2)``;
* real exponentials ``exp(c t / n)`` are kept by ``S`` up to the factor
  ``1 / (mu c^4 + 1)``;
* polynomials of degree ``<= 1`` are annihilated exactly, higher degrees up
  to ``4m - 1`` approximately after ``m`` passes.

Boundary rows of the penalty break the scalar picture, so every comparison
is restricted to the middle ``interior_fraction`` of the sample.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from typing import Literal

import numpy as np

from .errors import ParameterError
from .hp import SmootherSpec, apply_residual

DEFAULT_MU = 1.6e-5
DEFAULT_INTERIOR = 0.6


@dataclass(frozen=True)
class KLBasis:
    k: int
    n: int
    kind: Literal["sine", "cosine"] = "sine"

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise ParameterError(f"need k >= 1 and n >= 1, got k={self.k}, n={self.n}")
        if self.kind not in ("sine", "cosine"):
            raise ParameterError(f"unknown basis kind {self.kind!r}")

    @property
    def eigenvalue(self) -> float:
        return 1.0 / ((self.k - 0.5) * math.pi) ** 2

    def sample(self) -> np.ndarray:
        t = np.arange(1, self.n + 1)
        arg = t / (self.n * math.sqrt(self.eigenvalue))
        return math.sqrt(2.0) * (np.sin(arg) if self.kind == "sine" else np.cos(arg))


@dataclass(frozen=True)
class ShrinkageCheck:
    k: int | None
    n: int
    mu: float
    m: int
    predicted_factor: float
    empirical_sup_error: float
    interior_fraction: float
    within_bound: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def interior_slice(n: int, fraction: float = DEFAULT_INTERIOR) -> slice:
    if not 0 < fraction <= 1:
        raise ParameterError(f"interior fraction must be in (0, 1], got {fraction}")
    drop = int(round(n * (1 - fraction) / 2))
    return slice(drop, n - drop)


def max_admissible_k(n: int) -> int:
    """Largest k with ``((k - 1/2) pi)^4 <= (log n)^2``."""
    return int(math.floor(0.5 + math.sqrt(math.log(n)) / math.pi))


def shrinkage_factor(mu: float, k: int, m: int) -> float:
    if not mu > 0:
        raise ParameterError(f"mu must be > 0, got {mu}")
    lk = KLBasis(k, 1).eigenvalue
    return (mu / (mu + lk**2)) ** m


def residual_power(v: np.ndarray, lam: float, m: int) -> np.ndarray:
    """``(I - S)^m v`` by repeated banded solves."""
    spec = SmootherSpec(lam, v.size)
    for _ in range(m):
        v = apply_residual(spec, v)
    return v


def smoother_power(v: np.ndarray, lam: float, m: int) -> np.ndarray:
    """``S^m v``, each pass as ``v - (I - S) v`` so the null space is kept exactly."""
    spec = SmootherSpec(lam, v.size)
    for _ in range(m):
        v = v - apply_residual(spec, v)
    return v


def empirical_shrinkage_error(
    k: int,
    n: int,
    mu: float = DEFAULT_MU,
    m: int = 1,
    kind: Literal["sine", "cosine"] = "sine",
    interior_fraction: float = DEFAULT_INTERIOR,
) -> ShrinkageCheck:
    basis = KLBasis(k, n, kind)
    ok = k <= max_admissible_k(n)
    if not ok:
        warnings.warn(
            f"k={k} exceeds the admissible frequency bound {max_admissible_k(n)} for n={n}",
            stacklevel=2,
        )
    x = basis.sample()
    factor = shrinkage_factor(mu, k, m)
    resid = residual_power(x, mu * float(n) ** 4, m)
    inner = interior_slice(n, interior_fraction)
    err = float(np.max(np.abs(resid[inner] - factor * x[inner])))
    return ShrinkageCheck(k, n, mu, m, factor, err, interior_fraction, ok)


def exponential_shrinkage_check(
    c: float,
    n: int,
    mu: float = DEFAULT_MU,
    m: int = 1,
    interior_fraction: float = DEFAULT_INTERIOR,
) -> ShrinkageCheck:
    """Compare ``S^m exp(c t/n)`` with ``(mu c^4 + 1)^{-m} exp(c t/n)``.

    The reported error is the interior sup of the pointwise relative deviation.
    """
    if abs(c) > 5:
        warnings.warn(f"|c|={abs(c)} is large for the asymptotic approximation", stacklevel=2)
    t = np.arange(1, n + 1)
    x = np.exp(c * t / n)
    factor = (1.0 / (mu * c**4 + 1.0)) ** m
    smoothed = smoother_power(x, mu * float(n) ** 4, m)
    inner = interior_slice(n, interior_fraction)
    err = float(np.max(np.abs(smoothed[inner] / x[inner] - factor)))
    return ShrinkageCheck(None, n, mu, m, factor, err, interior_fraction)


def polynomial_annihilation_error(
    d: int, n: int, lam: float, m: int = 1, interior_fraction: float = DEFAULT_INTERIOR
) -> float:
    """Interior sup of ``(I - S)^m (t/n)^d`` normalized by ``sup (t/n)^d``.

    The ratio is invariant to the ``n^-d`` scale, so the monomial is sampled
    on integer ``t``; this keeps ``P x`` exact for ``d <= 1``.
    """
    if d < 0:
        raise ParameterError(f"degree must be >= 0, got {d}")
    x = np.arange(1, n + 1, dtype=float) ** d
    resid = residual_power(x, lam, m)
    inner = interior_slice(n, interior_fraction)
    return float(np.max(np.abs(resid[inner])) / np.max(np.abs(x)))


# --------------------------------------------------------------------------
# check grid used by the CLI


SHRINKAGE_THRESHOLD = 0.05 * math.sqrt(2.0)
CUBIC_THRESHOLD = 0.01


def run_checks(n: int = 400, mu: float = DEFAULT_MU) -> list[dict]:
    """Evaluate the standard grid of operator checks at ``n`` and ``2n``."""
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for kind in ("sine", "cosine"):
            for k in (1, 2, 3):
                for m in (1, 2, 5):
                    a = empirical_shrinkage_error(k, n, mu, m, kind)
                    b = empirical_shrinkage_error(k, 2 * n, mu, m, kind)
                    rows.append({
                        "check": f"shrinkage_{kind}", "k": k, "m": m, "n": n,
                        "predicted_factor": a.predicted_factor,
                        "error_n": a.empirical_sup_error, "error_2n": b.empirical_sup_error,
                        "threshold": SHRINKAGE_THRESHOLD,
                        "passed": a.empirical_sup_error < SHRINKAGE_THRESHOLD
                        and b.empirical_sup_error < a.empirical_sup_error,
                    })
        for c in (-3.0, 3.0):
            a = exponential_shrinkage_check(c, n, mu)
            b = exponential_shrinkage_check(c, 2 * n, mu)
            rows.append({
                "check": "exponential", "c": c, "m": 1, "n": n,
                "predicted_factor": a.predicted_factor,
                "error_n": a.empirical_sup_error, "error_2n": b.empirical_sup_error,
                "threshold": 0.05,
                "passed": a.empirical_sup_error < 0.05 and b.empirical_sup_error < a.empirical_sup_error,
            })
    lam = lambda size: 1600.0 * (size / 100.0) ** 4  # noqa: E731
    for d in (0, 1):
        err = polynomial_annihilation_error(d, n, lam(n), 3)
        rows.append({"check": "polynomial", "d": d, "m": 3, "n": n, "error_n": err,
                     "threshold": 1e-12, "passed": err < 1e-12})
    a = polynomial_annihilation_error(3, n, lam(n), 1)
    b = polynomial_annihilation_error(3, 2 * n, lam(2 * n), 1)
    rows.append({"check": "polynomial", "d": 3, "m": 1, "n": n, "error_n": a, "error_2n": b,
                 "threshold": CUBIC_THRESHOLD, "passed": a < CUBIC_THRESHOLD and b < a})
    e1 = polynomial_annihilation_error(7, n, lam(n), 1)
    e2 = polynomial_annihilation_error(7, n, lam(n), 2)
    rows.append({"check": "polynomial_degree_7", "m": 2, "n": n, "error_m1": e1, "error_m2": e2,
                 "passed": e2 < e1})
    return rows
