"""Sample ACF/PACF with normal-approximation bands."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import InvalidAlpha, LagOutOfRange, NumericalBreakdown, ZeroVariance
from .series import TimeSeries


@dataclass(frozen=True)
class CorrelogramPoint:
    lag: int
    value: float
    band_halfwidth: float


def as_array(s) -> np.ndarray:
    if isinstance(s, TimeSeries):
        return s.values
    return np.asarray(s, dtype=float).reshape(-1)


def default_max_lag(n: int) -> int:
    return int(min(n - 1, math.floor(10 * math.log10(n))))


def confidence_band(n: int, alpha: float = 0.05) -> float:
    """Half-width ``z_{1-alpha/2} / sqrt(n)`` of the white-noise band."""
    if not 0.0 < alpha < 1.0:
        raise InvalidAlpha(f"alpha must lie in (0, 1), got {alpha}")
    if n < 2:
        raise ValueError("need n >= 2 for a confidence band")
    return float(norm.ppf(1.0 - alpha / 2.0) / math.sqrt(n))


def acf_values(x, max_lag: int) -> np.ndarray:
    """Biased (1/n) sample autocorrelations for lags ``0..max_lag``."""
    x = as_array(x)
    n = x.size
    if n < 2:
        raise LagOutOfRange("need at least two observations")
    if not 0 <= max_lag < n:
        raise LagOutOfRange(f"max_lag must lie in [0, {n - 1}], got {max_lag}")
    dev = x - x.mean()
    denom = dev @ dev
    if denom <= 0.0 or denom < 1e-300:
        raise ZeroVariance("series is constant")
    r = np.empty(max_lag + 1)
    r[0] = 1.0
    for k in range(1, max_lag + 1):
        r[k] = (dev[k:] @ dev[:-k]) / denom
    return r


def durbin_levinson(r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Partial autocorrelations and final AR coefficients from ``r[0..K]``.

    Returns ``(pacf[1..K], phi)`` where ``phi`` solves the order-K Yule-Walker
    system.
    """
    r = np.asarray(r, dtype=float)
    K = r.size - 1
    pacf = np.zeros(K)
    phi = np.zeros(0)
    v = r[0]
    for k in range(1, K + 1):
        if abs(v) < 1e-12:
            raise NumericalBreakdown(f"prediction variance collapsed at lag {k}")
        a = (r[k] - phi @ r[k - 1:0:-1]) / v
        phi = np.concatenate((phi - a * phi[::-1], [a]))
        v *= 1.0 - a * a
        pacf[k - 1] = a
    return pacf, phi


def _points(values, n, alpha):
    band = confidence_band(n, alpha)
    return [CorrelogramPoint(k, float(v), band) for k, v in enumerate(values)]


def sample_acf(s, max_lag: int | None = None, alpha: float = 0.05) -> list[CorrelogramPoint]:
    x = as_array(s)
    if max_lag is None:
        max_lag = default_max_lag(x.size)
    return _points(acf_values(x, max_lag), x.size, alpha)


def sample_pacf(s, max_lag: int | None = None, alpha: float = 0.05) -> list[CorrelogramPoint]:
    """PACF via Durbin-Levinson on the sample ACF; lag 0 is reported as 1."""
    x = as_array(s)
    n = x.size
    if max_lag is None:
        max_lag = min(default_max_lag(n), n // 2)
    if max_lag > n / 2:
        raise LagOutOfRange(f"PACF lag {max_lag} exceeds n/2 = {n / 2}")
    r = acf_values(x, max_lag)
    pacf, _ = durbin_levinson(r)
    return _points(np.concatenate(([1.0], pacf)), n, alpha)
