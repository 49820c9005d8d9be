"""
Synthetic trend-plus-cycle series for the ten simulation designs.

Ids 1-5 build on an I(2) trend, ids 6-10 on a local-to-unity (LUR)
autoregression ``f[t] = exp(c/n) f[t-1] + v[t]``. The cycle is the AR(2)
``c[t] = cos(phi) c[t-1] - 0.25 c[t-2] + e[t]`` with ``phi`` set by the data
frequency.

Random numbers come from numpy's ``Philox4x32-10`` counter-based generator
keyed by the 64-bit seed. Every draw consumes the stream in the same order,
whatever the id: ``n`` trend shocks ``v``, ``n`` white-noise values ``w``,
then ``BURN_IN + n`` cycle shocks. Draws with the same seed are therefore
aligned across ids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
import pandas as pd
from scipy import signal

from .errors import ParameterError, SpecError

RNG_ALGORITHM = "numpy.random.Philox(key=seed) [Philox4x32-10]"
BURN_IN = 500
SEED_MASK = (1 << 64) - 1

CYCLE_PHI = {"quarterly": math.pi / 10, "monthly": math.pi / 30}
BASE_ID = {2: 1, 3: 1, 5: 4, 7: 6, 8: 6, 10: 9}


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed) & SEED_MASK))


def substream_seed(base_seed: int, replication: int) -> int:
    return (int(base_seed) ^ int(replication)) & SEED_MASK


@dataclass(frozen=True)
class DGPSpec:
    id: int
    n: int = 100
    frequency: Literal["quarterly", "monthly"] = "quarterly"
    c: float | None = None
    sigma_e: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.id not in range(1, 11):
            raise SpecError(f"DGP id must be in 1..10, got {self.id}")
        if self.n < 2:
            raise SpecError(f"n must be >= 2, got {self.n}")
        if self.frequency not in CYCLE_PHI:
            raise SpecError(f"frequency must be quarterly or monthly, got {self.frequency!r}")
        if self.id >= 6 and self.c is None:
            raise SpecError(f"DGP {self.id} needs a localizing coefficient c")
        if self.sigma_e is not None and not self.sigma_e > 0:
            raise SpecError(f"sigma_e must be > 0, got {self.sigma_e}")

    @property
    def phi(self) -> float:
        return CYCLE_PHI[self.frequency]

    @property
    def scale(self) -> float:
        if self.sigma_e is not None:
            return float(self.sigma_e)
        return 5.0 if self.id <= 5 else 1.0

    @property
    def half(self) -> int:
        """Last index (1-based) of the pre-break regime; ceil(n/2)."""
        return -(-self.n // 2)


@dataclass
class SimulatedDraw:
    f: np.ndarray
    cycle: np.ndarray
    y: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        t = np.arange(1, self.y.size + 1)
        return pd.DataFrame({"t": t, "f": self.f, "cycle": self.cycle, "y": self.y})


def gen_cycle(n: int, phi: float, sigma_e: float, rng: np.random.Generator) -> np.ndarray:
    """Stationary AR(2) cycle from a zero start after ``BURN_IN`` discarded steps."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if sigma_e < 0:
        raise ParameterError(f"sigma_e must be >= 0, got {sigma_e}")
    e = sigma_e * rng.standard_normal(BURN_IN + n)
    return cycle_recursion(e, phi)[BURN_IN:]


def cycle_recursion(e: np.ndarray, phi: float) -> np.ndarray:
    return signal.lfilter([1.0], [1.0, -math.cos(phi), 0.25], e)


def det_lin(t, n):
    return 100.0 * np.asarray(t, dtype=float) / n - 50.0


def det_snd(t, n):
    x = 100.0 * np.asarray(t, dtype=float) / n
    return 5.0 * x**0.2 * np.cos(0.05 * np.pi * x**0.9)


def det_cubic(t, n):
    return 500.0 * (np.asarray(t, dtype=float) / n) ** 3


def lur(v: np.ndarray, c: float, n: int) -> np.ndarray:
    """``f[t] = exp(c/n) f[t-1] + v[t]`` from ``f[0] = 0``."""
    return signal.lfilter([1.0], [1.0, -math.exp(c / n)], v)


def _trend(spec: DGPSpec, v: np.ndarray, w: np.ndarray) -> np.ndarray:
    n, h, kind = spec.n, spec.half, spec.id
    t = np.arange(1, n + 1)
    base = BASE_ID.get(kind, kind)

    if base == 1:
        f = np.cumsum(np.cumsum(v))
    elif base == 4:
        f = w.copy()
        f[h:] = det_lin(t[h:], n) ** 2 + np.cumsum(np.cumsum(v[h:]))
    elif base == 6:
        f = lur(v, spec.c, n)
    else:  # 9
        f = w.copy()
        f[h:] = det_lin(t[h:], n) + lur(v, spec.c, n)[: n - h]

    if kind in (2, 5, 7, 10):
        f = f + det_snd(t, n)
    elif kind in (3, 8):
        f = f + det_cubic(t, n)
    return f


def gen_dgp(spec: DGPSpec) -> SimulatedDraw:
    rng = make_rng(spec.seed)
    n, scale = spec.n, spec.scale
    v = rng.standard_normal(n)
    w = scale * rng.standard_normal(n)
    cycle = gen_cycle(n, spec.phi, scale, rng)
    f = _trend(spec, v, w)
    return SimulatedDraw(f=f, cycle=cycle, y=f + cycle)
