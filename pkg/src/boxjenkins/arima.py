"""ARIMA(p, d, q) with drift: exact Gaussian likelihood and ML fitting.

Conventions
-----------
The differenced series ``w_t`` is modelled as

    w_t - c = sum_i ar_i (w_{t-i} - c) + e_t + sum_j ma_j e_{t-j}

so the AR polynomial is ``1 - sum ar_i z^i`` and the MA polynomial is
``1 + sum ma_j z^j``. The drift ``c`` is the sample mean of ``w`` and is held
fixed while the ARMA part is estimated by maximising the exact likelihood
(Kalman filter, stationary initialisation). The innovation variance is
concentrated out of the objective.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.stats import norm

from . import _kalman
from .correlation import acf_values, durbin_levinson
from .errors import (
    HessianSingular,
    InvalidParams,
    LengthMismatch,
    NonFiniteLikelihood,
    OptimizerFailed,
    TooFewObservations,
)
from .series import LEVEL, TimeSeries, difference

_LOG2PI = math.log(2.0 * math.pi)
_PENALTY = 1e10


@dataclass(frozen=True)
class ArimaSpec:
    p: int
    d: int
    q: int
    with_constant: bool = True

    def __post_init__(self):
        if min(self.p, self.d, self.q) < 0:
            raise ValueError(f"orders must be non-negative, got {self.order}")

    @property
    def order(self) -> tuple[int, int, int]:
        return (self.p, self.d, self.q)

    @property
    def n_params(self) -> int:
        """k of the information criteria: drift, AR, MA and the innovation variance."""
        return int(self.with_constant) + self.p + self.q + 1

    def __str__(self):
        return f"ARIMA({self.p},{self.d},{self.q})"


@dataclass(frozen=True)
class ArimaParams:
    constant: float
    ar: tuple = ()
    ma: tuple = ()
    sigma2: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "ar", tuple(float(a) for a in self.ar))
        object.__setattr__(self, "ma", tuple(float(m) for m in self.ma))
        object.__setattr__(self, "constant", float(self.constant))
        object.__setattr__(self, "sigma2", float(self.sigma2))


@dataclass(frozen=True)
class RootInfo:
    real_part: float
    imag_part: float
    modulus: float
    frequency: float


@dataclass(frozen=True)
class ParamStat:
    name: str
    coef: float
    se: float
    z: float
    p_value: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class ArimaFit:
    spec: ArimaSpec
    params: ArimaParams
    loglik: float
    aic: float
    bic: float
    hqic: float
    std_errors: dict
    residuals: TimeSeries
    n_obs: int
    converged: bool
    data: TimeSeries = field(repr=False, default=None)
    inference: tuple = field(repr=False, default=())
    hessian_ok: bool = True

    @property
    def k(self) -> int:
        return self.spec.n_params

    @property
    def sigma(self) -> float:
        return math.sqrt(self.params.sigma2)


# --- likelihood ----------------------------------------------------------------

def _as_series(data) -> TimeSeries:
    if isinstance(data, TimeSeries):
        return data
    return TimeSeries(0, np.asarray(data, dtype=float), LEVEL, "")


def _values(data) -> np.ndarray:
    return data.values if isinstance(data, TimeSeries) else np.asarray(data, dtype=float).reshape(-1)


def _is_stationary(ar) -> bool:
    if len(ar) == 0:
        return True
    roots = _roots(np.concatenate(([1.0], -np.asarray(ar, dtype=float))))
    return bool(np.all(np.abs(roots) > 1.0 + 1e-10))


def kalman_loglik(spec: ArimaSpec, params: ArimaParams, data) -> float:
    """Exact Gaussian log-likelihood of an ARMA(p, q) for a d-times differenced series.

    ``params.constant`` is subtracted from ``data`` before filtering, so pass
    the differenced series as-is.
    """
    y = _values(data)
    if len(params.ar) != spec.p or len(params.ma) != spec.q:
        raise InvalidParams("parameter lengths do not match the model orders")
    if not params.sigma2 > 0.0:
        raise InvalidParams("innovation variance must be positive")
    if not _is_stationary(params.ar):
        raise InvalidParams("AR polynomial has a root on or inside the unit circle")
    z = y - (params.constant if spec.with_constant else 0.0)
    slog, ssq, ok = _kalman.concentrated_terms(
        np.ascontiguousarray(z), np.asarray(params.ar, dtype=float), np.asarray(params.ma, dtype=float)
    )
    if not ok:
        raise NonFiniteLikelihood("Kalman filter produced a non-positive or non-finite variance")
    n = z.size
    s2 = params.sigma2
    return -0.5 * (n * _LOG2PI + n * math.log(s2) + slog + ssq / s2)


# --- parameter transform -------------------------------------------------------

def _pacf_to_coefs(r):
    return _kalman.pacf_to_coefs(np.asarray(r, dtype=float))


def _coefs_to_pacf(phi):
    phi = np.asarray(phi, dtype=float).copy()
    r = np.zeros(phi.size)
    for k in range(phi.size, 0, -1):
        a = phi[k - 1]
        if not abs(a) < 1.0:
            raise InvalidParams("coefficients lie outside the stationary region")
        r[k - 1] = a
        prev = phi[: k - 1]
        phi = (prev + a * prev[::-1]) / (1.0 - a * a)
    return r


def _constrain(u, p, q):
    u = np.asarray(u, dtype=float)
    ar = _pacf_to_coefs(np.tanh(u[:p]))
    ma = -_pacf_to_coefs(np.tanh(u[p : p + q]))
    return ar, ma


def transform_params(unconstrained, p: int, q: int, constant: float = 0.0) -> ArimaParams:
    """Map ``(ar part, ma part, log sigma2)`` from R^{p+q+1} onto valid parameters.

    Each block goes through tanh to partial autocorrelations and then the
    Durbin-Levinson expansion, which lands exactly in the stationary
    (resp. invertible) region. The variance is ``exp`` of the last entry.
    """
    u = np.asarray(unconstrained, dtype=float).reshape(-1)
    if u.size != p + q + 1:
        raise LengthMismatch(f"expected {p + q + 1} unconstrained values, got {u.size}")
    ar, ma = _constrain(u, p, q)
    return ArimaParams(constant, ar, ma, math.exp(u[-1]))


def inverse_transform(params: ArimaParams) -> np.ndarray:
    ar = np.arctanh(_coefs_to_pacf(params.ar))
    ma = np.arctanh(_coefs_to_pacf(-np.asarray(params.ma, dtype=float)))
    if not params.sigma2 > 0.0:
        raise InvalidParams("innovation variance must be positive")
    return np.concatenate((ar, ma, [math.log(params.sigma2)]))


# --- roots -------------------------------------------------------------------

def _roots(poly):
    """Roots of ``poly[0] + poly[1] z + ...`` through the companion matrix."""
    poly = np.asarray(poly, dtype=float)
    nz = np.flatnonzero(poly)
    if nz.size == 0:
        return np.zeros(0, dtype=complex)
    poly = poly[: nz[-1] + 1]
    deg = poly.size - 1
    if deg == 0:
        return np.zeros(0, dtype=complex)
    monic = poly[:-1] / poly[-1]
    C = np.zeros((deg, deg))
    C[1:, :-1] = np.eye(deg - 1)
    C[:, -1] = -monic
    return np.linalg.eigvals(C)


def polynomial_roots(coeffs, kind: str = "MA") -> list[RootInfo]:
    """Roots of ``1 + sum c_i z^i`` (MA) or ``1 - sum c_i z^i`` (AR).

    Negative real roots get frequency -0.5. Sorted by frequency, then modulus.
    """
    c = np.asarray(coeffs, dtype=float).reshape(-1)
    if kind not in ("AR", "MA"):
        raise ValueError("kind must be 'AR' or 'MA'")
    if c.size == 0:
        return []
    poly = np.concatenate(([1.0], c if kind == "MA" else -c))
    out = []
    for z in _roots(poly):
        re, im = float(z.real), float(z.imag)
        if abs(im) <= 1e-10 * max(1.0, abs(re)):
            im = 0.0
            freq = 0.0 if re > 0 else -0.5
        else:
            freq = math.atan2(im, re) / (2.0 * math.pi)
        out.append(RootInfo(re, im, math.hypot(re, im), freq))
    out.sort(key=lambda r: (r.frequency, r.modulus))
    return out


def _push_outside(coefs, sign, margin=1.05):
    """Shrink ``coefs`` so that every root of 1 + sign*sum c_i z^i has modulus >= margin."""
    c = np.asarray(coefs, dtype=float)
    if c.size == 0:
        return c
    roots = _roots(np.concatenate(([1.0], sign * c)))
    if roots.size == 0:
        return c
    smallest = np.abs(roots).min()
    if smallest >= margin:
        return c
    rho = smallest / margin
    return c * rho ** np.arange(1, c.size + 1)


# --- estimation --------------------------------------------------------------

def information_criteria(loglik: float, k: int, n: int) -> tuple[float, float, float]:
    """AIC, BIC and HQIC for a model with ``k`` parameters on ``n`` observations."""
    aic = -2.0 * loglik + 2.0 * k
    bic = -2.0 * loglik + k * math.log(n)
    hqic = -2.0 * loglik + 2.0 * k * math.log(math.log(n))
    return aic, bic, hqic


def hannan_rissanen(z, p: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Two-stage least-squares ARMA estimate, pushed into the admissible region."""
    z = np.asarray(z, dtype=float)
    n = z.size
    ar = np.zeros(p)
    ma = np.zeros(q)
    if p + q == 0:
        return ar, ma
    if q == 0:
        m_long, e = 0, None
    else:
        m_long = max(p + q, min(n // 4, int(math.ceil(math.log(n) ** 2))))
        if m_long >= n - 1:
            return ar, ma
        try:
            _, a_long = durbin_levinson(acf_values(z, m_long))
        except (ArithmeticError, ValueError):
            return ar, ma
        e = np.zeros(n)
        for t in range(m_long, n):
            e[t] = z[t] - a_long @ z[t - m_long : t][::-1]
    start = m_long + max(p, q)
    rows = np.arange(start, n)
    if rows.size <= p + q + 1:
        return ar, ma
    cols = [z[rows - i] for i in range(1, p + 1)]
    cols += [e[rows - j] for j in range(1, q + 1)]
    X = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(X, z[rows], rcond=None)
    ar = _push_outside(coef[:p], -1.0)
    ma = _push_outside(coef[p:], 1.0)
    return ar, ma


def _start_vector(ar, ma):
    parts = []
    for coefs, sign in ((ar, -1.0), (ma, 1.0)):
        c = _push_outside(coefs, sign, margin=1.0 + 1e-6)
        try:
            r = _coefs_to_pacf(-sign * c)
        except InvalidParams:
            r = np.zeros(len(c))
        parts.append(np.arctanh(np.clip(r, -0.999, 0.999)))
    return np.concatenate(parts)


def fit(
    spec: ArimaSpec,
    data,
    *,
    seed: int = 0,
    start_params: ArimaParams | None = None,
    n_starts: int = 5,
    maxiter: int = 2000,
) -> ArimaFit:
    """Maximum-likelihood fit of ``spec`` to a level (or log-level) series.

    The series is differenced ``spec.d`` times internally. The ARMA part is
    found by Nelder-Mead over the unconstrained parametrisation, from a
    Hannan-Rissanen warm start plus ``n_starts - 1`` jittered copies of it;
    ``start_params`` adds one more start. The best start is polished by one
    restart and its status sets ``converged``.
    """
    series = _as_series(data)
    if len(series) <= spec.d:
        raise TooFewObservations(f"{len(series)} points cannot be differenced {spec.d} times")
    w, _ = difference(series, spec.d)
    w_raw = w.values
    n = w_raw.size
    k = spec.n_params
    if n <= k + 5:
        raise TooFewObservations(f"{spec} needs more than {k + 5} differenced observations, got {n}")
    c = float(w_raw.mean()) if spec.with_constant else 0.0
    z = np.ascontiguousarray(w_raw - c)
    p, q = spec.p, spec.q

    if p + q == 0:
        ar = ma = np.zeros(0)
        converged = True
    else:
        def objective(u):
            return _kalman.neg_concentrated_loglik(u, z, p, q)

        rng = np.random.default_rng(seed)
        u0 = _start_vector(*hannan_rissanen(z, p, q))
        starts = [u0] + [u0 + rng.normal(0.0, 0.5, p + q) for _ in range(max(n_starts - 1, 0))]
        if start_params is not None:
            starts.append(_start_vector(start_params.ar, start_params.ma))
        options = dict(maxiter=maxiter, fatol=1e-8, xatol=1e-6, adaptive=p + q > 4)
        best = None
        for s in starts:
            res = minimize(objective, s, method="Nelder-Mead", options=options)
            if np.isfinite(res.fun) and res.fun < _PENALTY and (best is None or res.fun < best.fun):
                best = res
        if best is None:
            raise OptimizerFailed(f"every start of {spec} gave a non-finite likelihood")
        polish = minimize(objective, best.x, method="Nelder-Mead", options=options)
        if polish.fun <= best.fun:
            best = polish
        converged = bool(polish.success)
        ar, ma = _constrain(best.x, p, q)

    v, F, _, _ = _kalman.filter_innovations(z, ar, ma)
    sigma2 = float(np.mean(v * v / F))
    params = ArimaParams(c, ar, ma, sigma2)
    loglik = kalman_loglik(spec, params, w_raw)
    aic, bic, hqic = information_criteria(loglik, k, n)
    residuals = TimeSeries(w.start_year, v, w.scale_tag, w.units)
    partial = ArimaFit(spec, params, loglik, aic, bic, hqic, {}, residuals, n, converged, series)
    table, ok = _inference(partial, w_raw)
    return ArimaFit(
        spec, params, loglik, aic, bic, hqic,
        {s.name: s.se for s in table}, residuals, n, converged, series, tuple(table), ok,
    )


# --- inference -----------------------------------------------------------------

def param_names(spec: ArimaSpec) -> list[str]:
    names = ["const"] if spec.with_constant else []
    names += [f"ar.L{i}" for i in range(1, spec.p + 1)]
    names += [f"ma.L{j}" for j in range(1, spec.q + 1)]
    return names + ["sigma2"]


def _pack(spec, params):
    head = [params.constant] if spec.with_constant else []
    return np.array(head + list(params.ar) + list(params.ma) + [params.sigma2])


def _unpack(spec, x):
    i = int(spec.with_constant)
    c = x[0] if spec.with_constant else 0.0
    return ArimaParams(c, x[i : i + spec.p], x[i + spec.p : i + spec.p + spec.q], x[-1])


def numerical_hessian(f, x, rel_step=1e-4, floor=1e-2):
    """Central-difference Hessian with steps ``rel_step * max(|x_i|, floor)``."""
    x = np.asarray(x, dtype=float)
    k = x.size
    h = rel_step * np.maximum(np.abs(x), floor)
    H = np.empty((k, k))
    f0 = f(x)
    for i in range(k):
        ei = np.zeros(k)
        ei[i] = h[i]
        H[i, i] = (f(x + ei) - 2.0 * f0 + f(x - ei)) / h[i] ** 2
        for j in range(i):
            ej = np.zeros(k)
            ej[j] = h[j]
            H[i, j] = H[j, i] = (
                f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)
            ) / (4.0 * h[i] * h[j])
    return 0.5 * (H + H.T)


def _inference(fit_: ArimaFit, w_raw):
    spec = fit_.spec

    def nll(x):
        try:
            return -kalman_loglik(spec, _unpack(spec, x), w_raw)
        except (InvalidParams, NonFiniteLikelihood):
            return np.nan

    x0 = _pack(spec, fit_.params)
    H = numerical_hessian(nll, x0)
    ok = bool(np.all(np.isfinite(H)))
    cov = np.full_like(H, np.nan)
    if ok:
        try:
            np.linalg.cholesky(H)
        except np.linalg.LinAlgError:
            ok = False
        try:
            cov = np.linalg.inv(H)
        except np.linalg.LinAlgError:
            ok = False
    diag = np.diag(cov)
    se = np.where(np.isfinite(diag) & (diag > 0), np.sqrt(np.abs(diag)), np.nan)
    zcrit = norm.ppf(0.975)
    table = []
    for name, coef, s in zip(param_names(spec), x0, se):
        zval = coef / s if np.isfinite(s) else np.nan
        pval = 2.0 * norm.sf(abs(zval)) if np.isfinite(zval) else np.nan
        table.append(ParamStat(name, float(coef), float(s), float(zval), float(pval),
                               float(coef - zcrit * s), float(coef + zcrit * s)))
    return table, ok


def std_errors(fit_: ArimaFit, data=None, *, strict: bool = False) -> list[ParamStat]:
    """Wald table (se, z, two-sided p, 95% interval) from the inverse numerical Hessian.

    Parameters whose variance is unavailable (Hessian not positive definite)
    carry NaN. With ``strict=True`` that situation raises
    :class:`HessianSingular` instead.
    """
    series = fit_.data if data is None else _as_series(data)
    w, _ = difference(series, fit_.spec.d)
    table, ok = _inference(fit_, w.values)
    if strict and not ok:
        raise HessianSingular(f"Hessian of {fit_.spec} is not positive definite at the optimum")
    return table
