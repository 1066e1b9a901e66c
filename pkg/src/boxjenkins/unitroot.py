"""Augmented Dickey-Fuller test.

The auxiliary regression is

    dy_t = a + b*t + gamma*y_{t-1} + sum_i delta_i * dy_{t-i} + e_t

with the deterministic part chosen by ``kind``. The statistic is the OLS
t-ratio on ``gamma``; p-values and critical values come from MacKinnon's
response surfaces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.stats import norm

from . import _mackinnon as mk
from .correlation import as_array
from .errors import SeriesTooShort, SingularDesign, UnsupportedKind

KINDS = {"no_constant": "n", "constant": "c", "constant_trend": "ct"}
LEVELS = ("1%", "5%", "10%")
_P_FLOOR = 1e-6


def _code(kind: str) -> str:
    try:
        return KINDS[kind]
    except KeyError:
        raise UnsupportedKind(f"regression kind must be one of {sorted(KINDS)}, got {kind!r}") from None


@dataclass(frozen=True)
class AdfResult:
    statistic: float
    p_value: float
    critical_values: dict = field(default_factory=dict)
    lag_order: int = 0
    regression_kind: str = "constant"
    n_used: int = 0

    def rejects_unit_root(self, alpha: float = 0.05) -> bool:
        return self.p_value < alpha


class AdfRegression(NamedTuple):
    gamma_hat: float
    t_stat: float
    n_used: int


def _design(x, code, lag, skip):
    """Response and regressors, dropping the first ``skip`` usable rows."""
    dx = np.diff(x)
    rows = np.arange(max(lag, skip), dx.size)
    y = dx[rows]
    cols = []
    if code in ("c", "ct"):
        cols.append(np.ones(rows.size))
    if code == "ct":
        cols.append(rows + 1.0)
    cols.append(x[rows])
    for i in range(1, lag + 1):
        cols.append(dx[rows - i])
    return y, np.column_stack(cols)


def _ols(y, X):
    """Least squares via QR. Returns coef, SSR, and (X'X)^-1."""
    n, k = X.shape
    if n <= k:
        raise SeriesTooShort(f"{n} observations cannot identify {k} coefficients")
    Q, R = np.linalg.qr(X)
    diag = np.abs(np.diag(R))
    if diag.min() <= 1e-10 * max(diag.max(), 1.0) or np.linalg.cond(R) > 1e12:
        raise SingularDesign("ADF design matrix is rank deficient")
    coef = np.linalg.solve(R, Q.T @ y)
    resid = y - X @ coef
    Rinv = np.linalg.inv(R)
    return coef, float(resid @ resid), Rinv @ Rinv.T


def _gamma_index(code):
    return {"n": 0, "c": 1, "ct": 2}[code]


def adf_regression(s, kind: str = "constant", lag_order: int = 0) -> AdfRegression:
    x = as_array(s)
    code = _code(kind)
    if lag_order < 0:
        raise ValueError("lag_order must be non-negative")
    if x.size < lag_order + 10:
        raise SeriesTooShort(f"ADF with {lag_order} lags needs at least {lag_order + 10} points")
    y, X = _design(x, code, lag_order, 0)
    coef, ssr, xtx_inv = _ols(y, X)
    n, k = X.shape
    s2 = ssr / (n - k)
    if s2 <= 1e-300 * max(1.0, float(y @ y)):
        raise SingularDesign("ADF regression fits exactly; residual variance is zero")
    g = _gamma_index(code)
    se = math.sqrt(s2 * xtx_inv[g, g])
    return AdfRegression(float(coef[g]), float(coef[g] / se), n)


def schwert_max_lag(n: int) -> int:
    return int(math.floor(12.0 * (n / 100.0) ** 0.25))


def adf_test(s, kind: str = "constant", max_lag="auto") -> AdfResult:
    """ADF test with the lag picked by AIC over ``0..max_lag``.

    Candidate lags are compared on a common sample (the first ``max_lag``
    differences are held back); the chosen lag is then re-estimated on every
    available observation.
    """
    x = as_array(s)
    code = _code(kind)
    n = x.size
    ntrend = {"n": 0, "c": 1, "ct": 2}[code]
    cap = max(0, min(n - 10, n // 2 - ntrend - 1))
    if max_lag == "auto" or max_lag is None:
        max_lag = min(schwert_max_lag(n), cap)
    elif max_lag > cap:
        raise SeriesTooShort(f"max_lag {max_lag} is too large for {n} observations (cap {cap})")
    if n < max_lag + 10:
        raise SeriesTooShort(f"ADF needs at least {max_lag + 10} points, got {n}")

    best_lag, best_aic = 0, np.inf
    for lag in range(max_lag + 1):
        y, X = _design(x, code, lag, max_lag)
        try:
            _, ssr, _ = _ols(y, X)
        except SingularDesign:
            continue
        m, k = X.shape
        aic = m * math.log(ssr / m) + 2 * k if ssr > 0 else -np.inf
        if aic < best_aic - 1e-12:
            best_lag, best_aic = lag, aic

    reg = adf_regression(x, kind, best_lag)
    return AdfResult(
        statistic=reg.t_stat,
        p_value=mackinnon_pvalue(reg.t_stat, kind),
        critical_values=mackinnon_critical_values(reg.n_used, kind),
        lag_order=best_lag,
        regression_kind=kind,
        n_used=reg.n_used,
    )


def mackinnon_critical_values(n, kind: str = "constant") -> dict:
    """Finite-sample 1/5/10% critical values; ``n=np.inf`` gives the asymptotic ones."""
    code = _code(kind)
    if n < 20:
        raise SeriesTooShort("response surface is only calibrated for n >= 20")
    table = mk.TAU_CV[code]
    if math.isinf(n):
        vals = table[:, 0]
    else:
        inv = 1.0 / n
        vals = table[:, 0] + table[:, 1] * inv + table[:, 2] * inv**2 + table[:, 3] * inv**3
    return {lvl: float(v) for lvl, v in zip(LEVELS, vals)}


def mackinnon_pvalue(statistic: float, kind: str = "constant") -> float:
    code = _code(kind)
    if statistic > mk.TAU_MAX[code]:
        p = 1.0
    elif statistic < mk.TAU_MIN[code]:
        p = 0.0
    else:
        coef = mk.TAU_SMALL_P[code] if statistic <= mk.TAU_STAR[code] else mk.TAU_LARGE_P[code]
        p = float(norm.cdf(np.polyval(coef[::-1], statistic)))
    return min(max(p, _P_FLOOR), 1.0 - _P_FLOOR)
