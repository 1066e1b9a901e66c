import numpy as np
import pytest
from scipy.stats import chi2

from boxjenkins import arima
from boxjenkins.arima import ArimaSpec
from boxjenkins.diagnostics import freedman_diaconis_edges, ljung_box, qq_points, residual_summary
from boxjenkins.errors import InvalidDof, TooFewResiduals, ZeroVariance
from boxjenkins.series import LEVEL, TimeSeries


def brute_q(e, m):
    n = len(e)
    d = e - e.mean()
    den = d @ d
    return n * (n + 2) * sum((d[k:] @ d[:-k] / den) ** 2 / (n - k) for k in range(1, m + 1))


def test_q_matches_definition(rng):
    e = rng.standard_normal(120)
    res = ljung_box(e, 12, 2)
    assert res.statistic == pytest.approx(brute_q(e, 12), rel=1e-12)
    assert res.dof == 10
    assert res.p_value == pytest.approx(chi2.sf(res.statistic, 10))


def test_zero_correlation_gives_p_one():
    # every lag-1 cross product of this pattern is zero
    res = ljung_box(np.array([1, 0, -1, 0] * 10, dtype=float), 1)
    assert res.statistic == pytest.approx(0.0, abs=1e-12)
    assert res.p_value == pytest.approx(1.0)


def test_errors(rng):
    with pytest.raises(InvalidDof):
        ljung_box(rng.standard_normal(50), 3, 3)
    with pytest.raises(TooFewResiduals):
        ljung_box(rng.standard_normal(12), 10)


def test_white_noise_size():
    rejections = 0
    for seed in range(200):
        e = np.random.default_rng(seed).standard_normal(1000)
        rejections += ljung_box(e, 10).p_value < 0.05
    assert 0.02 <= rejections / 200 <= 0.09


def test_ar_power(rng):
    e = rng.standard_normal(600)
    x = np.zeros_like(e)
    for t in range(1, e.size):
        x[t] = 0.8 * x[t - 1] + e[t]
    assert ljung_box(x[100:], 10).p_value < 1e-6


def test_histogram_edges(rng):
    x = rng.standard_normal(200)
    edges = freedman_diaconis_edges(x)
    assert edges[0] == x.min() and edges[-1] == x.max()
    assert len(edges) >= 6
    assert len(freedman_diaconis_edges(np.ones(10))) == 6


def test_qq_standard_normal(rng):
    x = rng.standard_normal(1000)
    qq = qq_points(x)
    # extreme order statistics wander by ~0.4 at n=1000; judge the central 98%
    core = np.abs(qq[:, 0]) <= 2.33
    assert np.max(np.abs(qq[core, 0] - qq[core, 1])) < 0.3
    assert np.all(np.diff(qq[:, 0]) > 0)


def _fake_fit(values, p=0, q=0):
    res = TimeSeries(1990, values, LEVEL, "")
    return arima.ArimaFit(
        ArimaSpec(p, 0, q), arima.ArimaParams(0.0, (0.0,) * p, (0.0,) * q, 1.0), 0.0, 0.0, 0.0, 0.0,
        {}, res, len(values), True,
    )


def test_summary_on_normal_draws(rng):
    rep = residual_summary(_fake_fit(rng.standard_normal(1000)))
    assert abs(rep.mean) < 0.1 and abs(rep.stddev - 1) < 0.1
    assert rep.histogram.counts.sum() == 1000
    assert len(rep.residual_acf) == 21
    assert rep.ljung_box.dof == 10


def test_summary_zero_residuals():
    with pytest.raises(ZeroVariance):
        residual_summary(_fake_fit(np.zeros(12)))
    with pytest.raises(TooFewResiduals):
        residual_summary(_fake_fit(np.arange(5.0)))


def test_fitted_model_residuals_look_white(fit_016):
    rep = residual_summary(fit_016)
    inside = [abs(pt.value) <= pt.band_halfwidth for pt in rep.residual_acf[1:11]]
    assert np.mean(inside) >= 0.9
    assert rep.ljung_box.dof == 10 - 6
