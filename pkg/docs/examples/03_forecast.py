"""Forecast five years ahead with a 95% band and check the test-period fit.

The model is estimated on the log scale, so the band is symmetric in logs
and the dollar point forecast is the geometric midpoint of its bounds.
"""
import numpy as np

from boxjenkins import ArimaSpec, TransformState, accuracy, fit, forecast, growth_rate, load_bundled, log_transform

raw = load_bundled()
logs = log_transform(raw)

model = fit(ArimaSpec(0, 1, 6), logs, seed=42)
state = TransformState.continuation(logs, d=1, log_applied=True)
fc = forecast(model, state, logs, h=5, confidence=0.95)

print("year   point   lower   upper")
for year, pt, lo, hi in fc.rows():
    print(f"{year}  {pt:6.2f}  {lo:6.2f}  {hi:6.2f}")
print(f"growth {raw.end_year}->{fc.horizon_years[-1]}: {growth_rate(fc, raw.values[-1]):.1f}%")
assert np.allclose(fc.point, np.sqrt(fc.lower * fc.upper))

# out-of-sample check: refit on the first 70% and forecast the rest
n_train = int(0.7 * len(raw))
train = logs.with_values(logs.values[:n_train])
m = fit(ArimaSpec(0, 1, 6), train, seed=42)
pred = forecast(m, TransformState.continuation(train, 1, True), train, len(raw) - n_train)
print(f"test-period accuracy (100 - MAPE): {accuracy(raw.values[n_train:], pred.point):.1f}%")
