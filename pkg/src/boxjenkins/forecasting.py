"""Multi-step forecasts with normal intervals, plus accuracy and growth metrics."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from . import _kalman
from .arima import ArimaFit, ArimaParams, ArimaSpec
from .errors import (
    InvalidConfidence,
    InvalidHorizon,
    LengthMismatch,
    NotConverged,
    StateMismatch,
    ZeroActual,
)
from .series import TimeSeries, TransformState, difference


@dataclass(frozen=True)
class Forecast:
    """Point forecasts and bounds on the original scale.

    ``point_transformed`` and ``se_transformed`` live on the modelling scale
    before differencing (natural logs for the expenditure pipeline), where
    the interval is ``point_transformed +/- z * se_transformed``.
    """

    horizon_years: tuple
    point: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    point_transformed: np.ndarray
    se_transformed: np.ndarray
    confidence: float

    def __len__(self):
        return len(self.horizon_years)

    def rows(self):
        return list(zip(self.horizon_years, self.point, self.lower, self.upper))


def psi_weights(params: ArimaParams, spec: ArimaSpec, h: int) -> np.ndarray:
    """First ``h`` MA(infinity) weights psi_0..psi_{h-1} of the ARMA part."""
    if h < 1:
        raise InvalidHorizon("need h >= 1")
    ar, ma = params.ar, params.ma
    psi = np.zeros(h)
    psi[0] = 1.0
    for j in range(1, h):
        acc = ma[j - 1] if j <= len(ma) else 0.0
        for i in range(1, min(j, len(ar)) + 1):
            acc += ar[i - 1] * psi[j - i]
        psi[j] = acc
    return psi


def integrated_psi(psi, d: int) -> np.ndarray:
    """Weights of the d-times integrated process (cumulative sums)."""
    out = np.asarray(psi, dtype=float)
    for _ in range(d):
        out = np.cumsum(out)
    return out


def _check_state(state, series, d):
    if state.d != d or len(state.stored_heads) != d:
        raise StateMismatch(f"state undoes d={state.d}, model was fitted with d={d}")
    if state.anchor != "trailing":
        raise StateMismatch("forecasting needs a continuation state (trailing heads)")
    expected = TransformState.continuation(series, d, state.log_applied).stored_heads
    if not np.allclose(expected, state.stored_heads, rtol=0.0, atol=1e-9):
        raise StateMismatch("state heads do not match the end of the observed series")


def forecast(
    fit: ArimaFit,
    state: TransformState,
    last_observed: TimeSeries,
    h: int,
    confidence: float = 0.95,
) -> Forecast:
    """Forecast ``h`` years past the end of ``last_observed``.

    ``last_observed`` is the modelling-scale series the fit was estimated on;
    the Kalman filter is run over it to obtain the conditional mean of the
    ARMA part, future innovations are set to zero and the drift is added
    back. Variances use integrated psi-weights, so the interval is symmetric
    on the modelling scale and the dollar figures are medians.
    """
    if h < 1:
        raise InvalidHorizon("forecast horizon must be at least one step")
    if not 0.0 < confidence < 1.0:
        raise InvalidConfidence(f"confidence must lie in (0, 1), got {confidence}")
    if not fit.converged:
        raise NotConverged(f"{fit.spec} did not converge; refusing to forecast")
    spec, params = fit.spec, fit.params
    _check_state(state, last_observed, spec.d)

    w, _ = difference(last_observed, spec.d)
    c = params.constant if spec.with_constant else 0.0
    z = np.ascontiguousarray(w.values - c)
    ar = np.asarray(params.ar, dtype=float)
    ma = np.asarray(params.ma, dtype=float)
    _, _, a, _ = _kalman.filter_innovations(z, ar, ma)
    T, _, _ = _kalman.system_matrices(ar, ma)
    zhat = np.empty(h)
    for j in range(h):
        zhat[j] = a[0]
        a = T @ a
    w_hat = c + zhat

    level = np.asarray(w_hat, dtype=float)
    for head in reversed(state.stored_heads):
        level = head + np.cumsum(level)

    psi = integrated_psi(psi_weights(params, spec, h), spec.d)
    se = np.sqrt(params.sigma2 * np.cumsum(psi**2))
    zq = norm.ppf(0.5 + confidence / 2.0)
    lo_t, hi_t = level - zq * se, level + zq * se
    back = np.exp if state.log_applied else (lambda x: x)
    years = tuple(range(last_observed.end_year + 1, last_observed.end_year + h + 1))
    return Forecast(years, back(level), back(lo_t), back(hi_t), level, se, float(confidence))


def _vals(x):
    return x.values if isinstance(x, TimeSeries) else np.asarray(x, dtype=float).reshape(-1)


def accuracy(actual, predicted) -> float:
    """100 minus the mean absolute percentage error."""
    a, p = _vals(actual), _vals(predicted)
    if a.size != p.size or a.size == 0:
        raise LengthMismatch(f"actual has {a.size} values, predicted has {p.size}")
    if np.any(a <= 0):
        raise ZeroActual("accuracy is undefined for non-positive actual values")
    return float(100.0 * (1.0 - np.mean(np.abs(a - p) / a)))


def growth_rate(fc: Forecast, base_value: float) -> float:
    """Percent change from ``base_value`` to the last point forecast."""
    if not base_value > 0:
        raise ValueError("base_value must be positive")
    if len(fc) == 0:
        raise ValueError("empty forecast")
    return float(100.0 * (fc.point[-1] / base_value - 1.0))
