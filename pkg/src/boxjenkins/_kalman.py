"""Compiled kernels for the ARMA state-space likelihood.

State form with m = max(p, q + 1):

    a_{t+1} = T a_t + R e_t,   y_t = a_t[0]

T carries the AR coefficients down its first column with an identity
superdiagonal; R = (1, theta_1, ..., theta_{m-1}). Everything here runs at
unit innovation variance; callers rescale.
"""
import numba
import numpy as np


@numba.njit(cache=True)
def system_matrices(ar, ma):
    p = ar.size
    q = ma.size
    m = max(p, q + 1)
    phi = np.zeros(m)
    phi[:p] = ar
    R = np.zeros(m)
    R[0] = 1.0
    R[1 : q + 1] = ma
    T = np.zeros((m, m))
    T[:, 0] = phi
    for i in range(m - 1):
        T[i, i + 1] = 1.0
    return T, R, phi


@numba.njit(cache=True)
def _t_apply(phi, P, out):
    """out = T P T' using the companion structure of T."""
    m = phi.size
    TP = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            TP[i, j] = phi[i] * P[0, j] + (P[i + 1, j] if i + 1 < m else 0.0)
    for i in range(m):
        for j in range(m):
            out[i, j] = TP[i, 0] * phi[j] + (TP[i, j + 1] if j + 1 < m else 0.0)


@numba.njit(cache=True)
def stationary_cov(ar, ma):
    """Solve P = T P T' + R R'.

    Without AR terms T is a shift and the series terminates after m terms;
    otherwise the vectorised (Kronecker) system is solved directly.
    """
    T, R, phi = system_matrices(ar, ma)
    m = R.size
    RR = np.outer(R, R)
    if ar.size == 0:
        P = RR.copy()
        term = RR.copy()
        nxt = np.empty((m, m))
        for _ in range(m - 1):
            _t_apply(phi, term, nxt)
            term[:, :] = nxt
            P += term
        return P
    A = np.eye(m * m) - np.kron(T, T)
    P = np.linalg.solve(A, RR.reshape(m * m)).reshape((m, m))
    return 0.5 * (P + P.T)


@numba.njit(cache=True)
def filter_innovations(y, ar, ma):
    """One-step prediction errors ``v`` and their unit-scale variances ``F``.

    Also returns the predicted state and covariance for time n+1, which is
    what forecasting continues from.
    """
    T, R, phi = system_matrices(ar, ma)
    m = R.size
    P = stationary_cov(ar, ma)
    a = np.zeros(m)
    anew = np.empty(m)
    k = np.empty(m)
    TPT = np.empty((m, m))
    n = y.size
    v = np.empty(n)
    F = np.empty(n)
    for t in range(n):
        f = P[0, 0]
        e = y[t] - a[0]
        v[t] = e
        F[t] = f
        if not f > 0.0:
            continue
        # k = T P Z' with Z = e_1
        for i in range(m):
            k[i] = phi[i] * P[0, 0] + (P[i + 1, 0] if i + 1 < m else 0.0)
        for i in range(m):
            anew[i] = phi[i] * a[0] + (a[i + 1] if i + 1 < m else 0.0) + k[i] * e / f
        a[:] = anew
        _t_apply(phi, P, TPT)
        for i in range(m):
            for j in range(i + 1):
                val = TPT[i, j] + R[i] * R[j] - k[i] * k[j] / f
                P[i, j] = val
                P[j, i] = val
    return v, F, a, P


@numba.njit(cache=True)
def concentrated_terms(y, ar, ma):
    """(sum log F, sum v^2/F, finite flag) at unit innovation variance."""
    v, F, a, P = filter_innovations(y, ar, ma)
    slog = 0.0
    ssq = 0.0
    for t in range(y.size):
        if not (F[t] > 0.0) or not np.isfinite(F[t]):
            return 0.0, 0.0, False
        slog += np.log(F[t])
        ssq += v[t] * v[t] / F[t]
    return slog, ssq, np.isfinite(slog) and np.isfinite(ssq)


@numba.njit(cache=True)
def pacf_to_coefs(r):
    """Durbin-Levinson expansion of partial autocorrelations into AR coefficients."""
    n = r.size
    phi = np.zeros(n)
    prev = np.zeros(n)
    for k in range(n):
        a = r[k]
        prev[:k] = phi[:k]
        for j in range(k):
            phi[j] = prev[j] - a * prev[k - 1 - j]
        phi[k] = a
    return phi


@numba.njit(cache=True)
def neg_concentrated_loglik(u, z, p, q):
    """Objective of the optimiser: unconstrained vector -> -log L with sigma^2 profiled out."""
    ar = pacf_to_coefs(np.tanh(u[:p]))
    ma = -pacf_to_coefs(np.tanh(u[p : p + q]))
    slog, ssq, ok = concentrated_terms(z, ar, ma)
    if not ok or not ssq > 0.0:
        return 1e10
    n = z.size
    return 0.5 * (n * np.log(2.0 * np.pi) + n * np.log(ssq / n) + n + slog)
