import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import brute_acf, yule_walker_last

from boxjenkins.correlation import (
    acf_values,
    confidence_band,
    default_max_lag,
    durbin_levinson,
    sample_acf,
    sample_pacf,
)
from boxjenkins.errors import InvalidAlpha, LagOutOfRange, ZeroVariance


def simulate_ar1(phi, n, rng, burn=200):
    e = rng.standard_normal(n + burn)
    x = np.zeros_like(e)
    for t in range(1, e.size):
        x[t] = phi * x[t - 1] + e[t]
    return x[burn:]


def test_lag_zero_is_one():
    pts = sample_acf(np.array([1.0, 3.0, 2.0, 5.0, 4.0]), 2)
    assert pts[0].value == 1.0
    assert [p.lag for p in pts] == [0, 1, 2]


def test_ramp_hand_value():
    assert sample_acf(np.arange(1.0, 6.0), 1)[1].value == pytest.approx(0.4, abs=1e-15)


def test_alternating():
    x = np.array([1.0, -1.0] * 50)
    assert acf_values(x, 1)[1] == pytest.approx(brute_acf(list(x), 1), abs=1e-14)
    assert acf_values(x, 1)[1] == pytest.approx(-0.99)


def test_errors():
    with pytest.raises(ZeroVariance):
        acf_values(np.ones(5), 2)
    with pytest.raises(LagOutOfRange):
        acf_values(np.arange(5.0), 5)
    with pytest.raises(LagOutOfRange):
        sample_pacf(np.arange(10.0), 6)
    with pytest.raises(InvalidAlpha):
        confidence_band(100, 1.0)


@pytest.mark.parametrize("n,alpha,expected,tol", [(100, 0.05, 0.196, 1e-3), (400, 0.05, 0.098, 1e-3), (100, 0.32, 0.0995, 1e-4)])
def test_confidence_band(n, alpha, expected, tol):
    assert confidence_band(n, alpha) == pytest.approx(expected, abs=tol)


def test_default_lag():
    assert default_max_lag(60) == 17
    assert default_max_lag(5) == 4


def test_pacf_ar1(rng):
    x = simulate_ar1(0.7, 5000, rng)
    pacf = [p.value for p in sample_pacf(x, 5)]
    assert pacf[1] == pytest.approx(0.7, abs=0.05)
    assert max(abs(v) for v in pacf[2:]) < 0.05


def test_pacf_white_noise(rng):
    n = 5000
    x = rng.standard_normal(n)
    pts = sample_pacf(x, 10)[1:]
    band = 1.96 / np.sqrt(n)
    assert all(abs(p.value) < 1.5 * band for p in pts)
    assert np.mean([abs(p.value) < band for p in pts]) >= 0.9


def test_durbin_levinson_ar2_exact():
    # theoretical ACF of AR(2) with phi = (0.5, 0.3)
    phi1, phi2 = 0.5, 0.3
    r = [1.0, phi1 / (1 - phi2)]
    for _ in range(4):
        r.append(phi1 * r[-1] + phi2 * r[-2])
    pacf, phi = durbin_levinson(np.array(r))
    np.testing.assert_allclose(pacf[:2], [r[1], phi2], atol=1e-12)
    np.testing.assert_allclose(pacf[2:], 0.0, atol=1e-12)
    np.testing.assert_allclose(phi, [phi1, phi2, 0, 0, 0], atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(12, 60))
def test_against_direct_solves(seed, n):
    x = np.random.default_rng(seed).standard_normal(n).cumsum() * 0.3 + np.random.default_rng(seed + 1).standard_normal(n)
    K = min(6, n // 2)
    r = acf_values(x, K)
    for k in range(1, K + 1):
        assert abs(r[k] - brute_acf(list(x), k)) < 1e-8
    pacf = [p.value for p in sample_pacf(x, K)]
    for k in range(1, K + 1):
        assert abs(pacf[k] - yule_walker_last(r, k)) < 1e-8
