"""Residual checks: summary statistics, histogram, Q-Q points, ACF and Ljung-Box."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2, norm

from .arima import ArimaFit
from .correlation import CorrelogramPoint, acf_values, as_array, sample_acf
from .errors import InvalidDof, TooFewResiduals
from .series import TimeSeries


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray


@dataclass(frozen=True)
class LjungBoxResult:
    statistic: float
    dof: int
    p_value: float


@dataclass(frozen=True)
class DiagnosticsReport:
    residuals: TimeSeries
    histogram: Histogram
    qq_points: np.ndarray  # (n, 2): theoretical normal quantile, standardized residual
    residual_acf: list
    ljung_box: LjungBoxResult
    mean: float
    stddev: float


def ljung_box(residuals, max_lag: int = 10, fitted_param_count: int = 0) -> LjungBoxResult:
    """Q = n(n+2) sum_{k<=m} r_k^2/(n-k), referred to chi2(m - fitted_param_count)."""
    e = as_array(residuals)
    n = e.size
    dof = max_lag - fitted_param_count
    if dof <= 0:
        raise InvalidDof(f"max_lag {max_lag} leaves no degrees of freedom after {fitted_param_count} parameters")
    if n <= max_lag + 5:
        raise TooFewResiduals(f"Ljung-Box at lag {max_lag} needs more than {max_lag + 5} residuals")
    r = acf_values(e, max_lag)[1:]
    k = np.arange(1, max_lag + 1)
    q = float(n * (n + 2) * np.sum(r**2 / (n - k)))
    return LjungBoxResult(q, dof, float(chi2.sf(q, dof)))


def freedman_diaconis_edges(x, min_bins: int = 5) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    lo, hi = float(x.min()), float(x.max())
    if hi <= lo:
        return np.linspace(lo - 0.5, hi + 0.5, min_bins + 1)
    q75, q25 = np.percentile(x, [75, 25])
    width = 2.0 * (q75 - q25) * x.size ** (-1.0 / 3.0)
    bins = math.ceil((hi - lo) / width) if width > 0 else min_bins
    return np.linspace(lo, hi, max(bins, min_bins) + 1)


def qq_points(x) -> np.ndarray:
    """Normal Q-Q pairs at plotting positions (i - 0.5)/n for standardized ``x``."""
    x = np.asarray(x, dtype=float)
    n = x.size
    z = np.sort((x - x.mean()) / x.std())
    theo = norm.ppf((np.arange(1, n + 1) - 0.5) / n)
    return np.column_stack((theo, z))


def residual_summary(fit: ArimaFit, ljung_lag: int = 10) -> DiagnosticsReport:
    e = fit.residuals
    x = e.values
    n = x.size
    if n < 8:
        raise TooFewResiduals(f"need at least 8 residuals, got {n}")
    acf_lag = min(20, n // 4)
    racf = sample_acf(x, acf_lag)  # raises ZeroVariance for a constant residual series
    n_arma = fit.spec.p + fit.spec.q
    lag = min(max(ljung_lag, n_arma + 1), n - 6)
    lb = ljung_box(x, lag, n_arma)
    edges = freedman_diaconis_edges(x)
    counts, _ = np.histogram(x, bins=edges)
    return DiagnosticsReport(
        residuals=e,
        histogram=Histogram(edges, counts),
        qq_points=qq_points(x),
        residual_acf=racf,
        ljung_box=lb,
        mean=float(x.mean()),
        stddev=float(x.std()),
    )


__all__ = [
    "CorrelogramPoint",
    "DiagnosticsReport",
    "Histogram",
    "LjungBoxResult",
    "ljung_box",
    "qq_points",
    "residual_summary",
]
