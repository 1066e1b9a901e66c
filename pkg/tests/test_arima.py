import math

import numpy as np
import pytest
from oracles import dense_loglik
from scipy.stats import norm

from boxjenkins import arima
from boxjenkins.arima import ArimaParams, ArimaSpec
from boxjenkins.errors import InvalidParams, LengthMismatch, TooFewObservations


def random_case(rng):
    p, q = rng.integers(0, 3, size=2)
    n = int(rng.integers(1, 9))
    ar = arima._pacf_to_coefs(rng.uniform(-0.85, 0.85, p))
    ma = -arima._pacf_to_coefs(rng.uniform(-0.9, 0.9, q))
    sigma2 = float(rng.uniform(0.2, 3.0))
    mu = float(rng.normal())
    y = mu + rng.normal(size=n) * 1.5
    return ArimaSpec(int(p), 0, int(q)), ArimaParams(mu, ar, ma, sigma2), y


def test_white_noise_zeros():
    ll = arima.kalman_loglik(ArimaSpec(0, 0, 0, False), ArimaParams(0.0, (), (), 1.0), np.zeros(3))
    assert ll == pytest.approx(-1.5 * math.log(2 * math.pi), abs=1e-12)


def test_ar1_two_step_hand_filter():
    ll = arima.kalman_loglik(ArimaSpec(1, 0, 0, False), ArimaParams(0.0, (0.5,), (), 1.0), np.array([1.0, 0.5]))
    ref = norm.logpdf(1.0, 0.0, math.sqrt(4 / 3)) + norm.logpdf(0.5, 0.5, 1.0)
    assert ll == pytest.approx(ref, abs=1e-12)


def test_dense_oracle_random_cases():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(50):
        spec, params, y = random_case(rng)
        ll = arima.kalman_loglik(spec, params, y)
        ref = dense_loglik(params.ar, params.ma, params.sigma2, params.constant, y)
        worst = max(worst, abs(ll - ref))
    assert worst < 1e-8


def test_nonstationary_rejected():
    with pytest.raises(InvalidParams):
        arima.kalman_loglik(ArimaSpec(1, 0, 0), ArimaParams(0.0, (1.2,), (), 1.0), np.zeros(4))


def test_transform_zero_vector():
    params = arima.transform_params(np.zeros(5), 2, 2)
    assert params.ar == (0.0, 0.0) and params.ma == (0.0, 0.0)
    assert params.sigma2 == 1.0


def test_transform_length():
    with pytest.raises(LengthMismatch):
        arima.transform_params(np.zeros(3), 2, 2)


def roundtrip_error(rng, max_order, draws):
    worst = 0.0
    for _ in range(draws):
        p, q = rng.integers(0, max_order + 1, size=2)
        u = rng.uniform(-3, 3, p + q + 1)
        params = arima.transform_params(u, p, q)
        worst = max(worst, np.max(np.abs(arima.inverse_transform(params) - u)))
        assert all(r.modulus > 1.0 for r in arima.polynomial_roots(params.ar, "AR"))
        assert all(r.modulus > 1.0 for r in arima.polynomial_roots(params.ma, "MA"))
    return worst


def test_transform_roundtrip_small_orders():
    assert roundtrip_error(np.random.default_rng(3), 2, 1000) < 1e-10


def test_transform_roundtrip_high_orders():
    # With |pacf| up to tanh(3) = 0.995 the order-6 coefficient map is badly
    # conditioned (each step-down level divides by 1 - a^2), so rounding the
    # coefficients to float64 alone costs up to ~1e-6 in the unconstrained space.
    assert roundtrip_error(np.random.default_rng(4), 6, 1000) < 1e-5


def test_information_criteria():
    aic, bic, hqic = arima.information_criteria(46.012, 8, 48)
    assert (aic, bic, hqic) == pytest.approx((-76.024, -61.054, -70.368), abs=0.01)
    assert arima.information_criteria(0.0, 0, 10)[0] == 0.0
    assert arima.information_criteria(10.0, 2, math.e**2)[1] == pytest.approx(-16.0)


def test_roots_simple():
    (r,) = arima.polynomial_roots([0.5], "MA")
    assert (r.real_part, r.imag_part, r.modulus, r.frequency) == pytest.approx((-2.0, 0.0, 2.0, -0.5))
    rr = arima.polynomial_roots([0.0, 1.0], "MA")
    assert sorted(r.frequency for r in rr) == pytest.approx([-0.25, 0.25])
    assert all(r.modulus == pytest.approx(1.0) for r in rr)
    assert arima.polynomial_roots([], "MA") == []
    (a,) = arima.polynomial_roots([0.5], "AR")
    assert a.real_part == pytest.approx(2.0)


def test_table_roots():
    theta = (0.5263, 0.2898, -0.4071, -0.2423, -0.8283, -0.3379)
    mods = sorted(r.modulus for r in arima.polynomial_roots(theta, "MA"))
    assert mods == pytest.approx(sorted((1.0001, 1.1076, 1.1076, 1.0, 1.0, 2.4125)), abs=0.01)


def test_white_noise_closed_form(rng):
    x = rng.normal(3.0, 2.0, 50)
    f = arima.fit(ArimaSpec(0, 0, 0), x)
    assert f.params.constant == pytest.approx(x.mean(), abs=1e-6)
    assert f.params.sigma2 == pytest.approx(x.var(), abs=1e-6)
    assert f.converged and f.n_obs == 50


def test_too_few_observations():
    with pytest.raises(TooFewObservations):
        arima.fit(ArimaSpec(3, 1, 3), np.arange(1.0, 12.0))


def test_ma1_recovery():
    e = np.random.default_rng(5).standard_normal(2001)
    f = arima.fit(ArimaSpec(0, 0, 1), e[1:] + 0.6 * e[:-1])
    assert f.params.ma[0] == pytest.approx(0.6, abs=0.06)
    assert f.params.sigma2 == pytest.approx(1.0, abs=0.1)


def test_ar1_standard_error():
    rng = np.random.default_rng(8)
    e = rng.standard_normal(5200)
    x = np.zeros_like(e)
    for t in range(1, e.size):
        x[t] = 0.6 * x[t - 1] + e[t]
    f = arima.fit(ArimaSpec(1, 0, 0), x[200:])
    se = f.std_errors["ar.L1"]
    ref = math.sqrt((1 - 0.6**2) / 5000)
    assert abs(se / ref - 1) < 0.3


def test_fit_invariants(fit_016, log_train):
    f = fit_016
    aic, bic, hqic = arima.information_criteria(f.loglik, f.k, f.n_obs)
    assert (f.aic, f.bic, f.hqic) == pytest.approx((aic, bic, hqic), abs=1e-9)
    assert f.k == 8
    assert f.params.sigma2 > 0
    assert len(f.residuals) == f.n_obs == len(log_train) - 1
    for stat in f.inference:
        if math.isfinite(stat.se):
            assert (stat.ci_low + stat.ci_high) / 2 == pytest.approx(stat.coef, abs=1e-9)
            assert stat.z == pytest.approx(stat.coef / stat.se)
    # a fit's likelihood is what kalman_loglik reports at its parameters
    w = np.diff(log_train.values)
    assert arima.kalman_loglik(ArimaSpec(0, 0, 6), f.params, w) == pytest.approx(f.loglik, abs=1e-8)


def test_nesting_monotone(log_train):
    prev = None
    for q in range(0, 4):
        start = None
        if prev is not None:
            start = ArimaParams(prev.params.constant, (), prev.params.ma + (0.0,), prev.params.sigma2)
        cur = arima.fit(ArimaSpec(0, 1, q), log_train, start_params=start)
        if prev is not None:
            assert cur.loglik >= prev.loglik - 1e-4
        prev = cur


def test_seed_determinism(log_train):
    a = arima.fit(ArimaSpec(1, 1, 1), log_train, seed=3)
    b = arima.fit(ArimaSpec(1, 1, 1), log_train, seed=3)
    assert a.loglik == b.loglik and a.params == b.params
