import numpy as np
import pytest

from boxjenkins.errors import SeriesTooShort, SingularDesign, UnsupportedKind
from boxjenkins.unitroot import (
    adf_regression,
    adf_test,
    mackinnon_critical_values,
    mackinnon_pvalue,
    schwert_max_lag,
)

# Reference values produced once with statsmodels.tsa.stattools.adfuller
# (autolag="AIC") on the same inputs and frozen here.
STATSMODELS_REF = [
    # seed, kind, statistic, p-value, lag, n_used
    (7, "constant", -2.317354133484416, 0.16643198865490555, 0, 119),
    (8, "constant_trend", -1.9744762080114115, 0.615265916506178, 0, 119),
    (9, "no_constant", -1.0835899510701184, 0.2518396360102143, 2, 117),
]


def ar1(phi, n, rng, burn=100):
    e = rng.standard_normal(n + burn)
    x = np.zeros_like(e)
    for t in range(1, e.size):
        x[t] = phi * x[t - 1] + e[t]
    return x[burn:]


def lstsq_tstat(x, lag, trend):
    """Independent OLS t-ratio on y_{t-1} via lstsq and the textbook covariance."""
    dx = np.diff(x)
    rows = np.arange(lag, dx.size)
    cols = [np.ones(rows.size)] if trend in ("c", "ct") else []
    if trend == "ct":
        cols.append(rows + 1.0)
    cols.append(x[rows])
    cols += [dx[rows - i] for i in range(1, lag + 1)]
    X = np.column_stack(cols)
    y = dx[rows]
    b, *_ = np.linalg.lstsq(X, y, rcond=None)
    e = y - X @ b
    s2 = e @ e / (X.shape[0] - X.shape[1])
    g = {"n": 0, "c": 1, "ct": 2}[trend]
    return b[g] / np.sqrt(s2 * np.linalg.inv(X.T @ X)[g, g])


@pytest.mark.parametrize("lag,kind,code", [(0, "constant", "c"), (3, "constant_trend", "ct"), (2, "no_constant", "n")])
def test_regression_matches_lstsq(rng, lag, kind, code):
    x = rng.standard_normal(80).cumsum()
    reg = adf_regression(x, kind, lag)
    assert reg.t_stat == pytest.approx(lstsq_tstat(x, lag, code), rel=1e-9)
    assert reg.n_used == 80 - 1 - lag


def test_ramp_is_singular():
    with pytest.raises(SingularDesign):
        adf_regression(np.arange(30.0), "constant_trend", 0)


def test_unknown_kind():
    with pytest.raises(UnsupportedKind):
        adf_test(np.arange(30.0), "drift")


def test_too_short():
    with pytest.raises(SeriesTooShort):
        adf_regression(np.arange(8.0), "constant", 0)


@pytest.mark.parametrize("seed,kind,stat,pval,lag,n_used", STATSMODELS_REF)
def test_reference_values(seed, kind, stat, pval, lag, n_used):
    x = np.random.default_rng(seed).standard_normal(120).cumsum()
    res = adf_test(x, kind)
    assert res.statistic == pytest.approx(stat, abs=1e-9)
    assert res.p_value == pytest.approx(pval, abs=1e-9)
    assert (res.lag_order, res.n_used) == (lag, n_used)


def test_random_walk_null_distribution():
    # Dickey-Fuller tau_c: P(t < -2.5) is about 0.115 and P(t > 0.5) about 0.015,
    # so roughly 87% of random walks land in (-2.5, 0.5).
    t = np.array([
        adf_regression(np.random.default_rng(seed).standard_normal(500).cumsum(), "constant", 0).t_stat
        for seed in range(400)
    ])
    share = np.mean((t > -2.5) & (t < 0.5))
    assert 0.81 <= share <= 0.93
    assert np.mean(t < -2.86) == pytest.approx(0.05, abs=0.025)


def test_stationary_ar_large_t(rng):
    assert adf_regression(ar1(0.5, 500, rng), "constant", 0).t_stat < -5
    assert adf_test(ar1(0.3, 1000, rng)).p_value < 0.01


def test_schwert():
    assert schwert_max_lag(100) == 12
    assert schwert_max_lag(59) == 10


def test_critical_values_limits():
    cv = mackinnon_critical_values(np.inf, "constant")
    for key, ref in zip(("1%", "5%", "10%"), (-3.43, -2.86, -2.57)):
        assert cv[key] == pytest.approx(ref, abs=0.01)
    big = mackinnon_critical_values(10**7, "constant")
    assert big["5%"] == pytest.approx(cv["5%"], abs=1e-6)
    with pytest.raises(SeriesTooShort):
        mackinnon_critical_values(10, "constant")


def test_critical_values_small_sample_order():
    cv = mackinnon_critical_values(58, "constant")
    assert cv["1%"] < cv["5%"] < cv["10%"]
    for key, ref in zip(("1%", "5%", "10%"), (-3.55, -2.91, -2.59)):
        assert cv[key] == pytest.approx(ref, abs=0.01)


@pytest.mark.parametrize("kind", ["no_constant", "constant", "constant_trend"])
def test_pvalue_self_consistency(kind):
    # the p-value surface is asymptotic, so compare with the large-n critical values
    cv = mackinnon_critical_values(np.inf, kind)
    assert mackinnon_pvalue(cv["5%"], kind) == pytest.approx(0.05, abs=0.005)
    assert mackinnon_pvalue(cv["1%"], kind) == pytest.approx(0.01, abs=0.002)


def test_pvalue_tails():
    assert mackinnon_pvalue(0.0, "constant") > 0.9
    assert mackinnon_pvalue(-10.0, "constant") == pytest.approx(1e-6)
    assert mackinnon_pvalue(50.0, "constant") == pytest.approx(1 - 1e-6)
    grid = np.linspace(-6, 2, 200)
    p = [mackinnon_pvalue(t, "constant") for t in grid]
    assert np.all(np.diff(p) >= 0)


def test_result_fields(rng):
    res = adf_test(rng.standard_normal(60).cumsum())
    assert set(res.critical_values) == {"1%", "5%", "10%"}
    assert res.regression_kind == "constant"
    assert 0 <= res.lag_order <= schwert_max_lag(60)
    assert res.rejects_unit_root() == (res.p_value < 0.05)
