"""Is the expenditure series stationary, and what makes it so?

The raw series grows roughly exponentially, so an ADF test cannot reject a
unit root. Taking logs turns the growth into a linear trend and one round
of differencing leaves annual growth rates, which look stationary.
"""
import numpy as np

from boxjenkins import adf_test, difference, load_bundled, log_transform, sample_acf

raw = load_bundled()
print(f"{len(raw)} years, {raw.start_year}-{raw.end_year}, last value {raw.values[-1]} {raw.units}")

res = adf_test(raw)
print(f"raw:          tau = {res.statistic:6.3f}  p = {res.p_value:.4f}  lags = {res.lag_order}")

growth, state = difference(log_transform(raw), 1)
res = adf_test(growth)
print(f"log, d=1:     tau = {res.statistic:6.3f}  p = {res.p_value:.2e}  lags = {res.lag_order}")
print("critical values at n =", res.n_used, {k: round(v, 3) for k, v in res.critical_values.items()})

# mean annual log-growth is the drift an ARIMA(p,1,q) with constant will estimate
print(f"mean growth {growth.values.mean():.4f}  ({np.expm1(growth.values.mean()):.1%} a year)")

band = sample_acf(growth)[0].band_halfwidth
spikes = [pt.lag for pt in sample_acf(growth)[1:] if abs(pt.value) > band]
print("ACF lags outside the 95% band:", spikes or "none")
