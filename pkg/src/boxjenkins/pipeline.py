"""End-to-end Box-Jenkins run: ingest, test, transform, select, diagnose, forecast."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field, fields, is_dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import arima, correlation, diagnostics, forecasting, selection, unitroot
from .errors import BoxJenkinsError, MissingYear, ParseError, SeriesTooShort
from .series import TimeSeries, TransformState, difference, log_transform, train_test_split

log = logging.getLogger(__name__)

BUNDLED_DATASET = "india_milex_1960_2019.csv"
FORMATS = ("json", "csv", "svg")


def bundled_path() -> Path:
    return Path(str(resources.files("boxjenkins") / "data" / BUNDLED_DATASET))


def load_bundled() -> TimeSeries:
    """The bundled 1960-2019 yearly military expenditure series (US$ billions)."""
    return ingest_csv(bundled_path())


def ingest_csv(path) -> TimeSeries:
    """Read a ``year,value`` CSV into a contiguous yearly series.

    Rows may come in any order; duplicated or missing years are errors.
    """
    text = Path(path).read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError(1, "file is empty") from None
    if [h.strip().lower() for h in header] != ["year", "value"]:
        raise ParseError(1, f"expected header 'year,value', got {','.join(header)!r}")
    rows = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise ParseError(lineno, f"expected 2 fields, got {len(row)}")
        try:
            year = int(row[0])
            value = float(row[1])
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
        if not math.isfinite(value):
            raise ParseError(lineno, "value is not finite")
        if year in rows:
            raise ParseError(lineno, f"duplicate year {year}")
        rows[year] = value
    if not rows:
        raise SeriesTooShort("no data rows")
    years = sorted(rows)
    for a, b in zip(years, years[1:]):
        if b != a + 1:
            raise MissingYear(a + 1)
    return TimeSeries(years[0], [rows[y] for y in years])


@dataclass(frozen=True)
class RunConfig:
    data_path: str | None = None
    train_fraction: float = 0.7
    apply_log: bool = True
    d: int | str = "auto"
    p_max: int = 6
    q_max: int = 6
    criterion: str = "AIC"
    horizon: int = 5
    confidence: float = 0.95
    out_dir: str = "out"
    formats: tuple = FORMATS
    seed: int = 42
    fit_scope: str = "train"
    n_jobs: int = 1

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")
        if self.fit_scope not in ("train", "full"):
            raise ValueError("fit_scope must be 'train' or 'full'")
        if self.d != "auto" and self.d not in (0, 1, 2):
            raise ValueError("d must be 'auto', 0, 1 or 2")
        bad = set(self.formats) - set(FORMATS)
        if bad:
            raise ValueError(f"unknown formats {sorted(bad)}")


@dataclass(frozen=True)
class RunReport:
    config: RunConfig
    series: TimeSeries
    adf_before: unitroot.AdfResult | None
    adf_after: unitroot.AdfResult | None
    d: int
    acf: list
    pacf: list
    grid: list
    chosen: arima.ArimaSpec
    fit: arima.ArimaFit
    roots: list
    diagnostics: diagnostics.DiagnosticsReport
    test: TimeSeries
    test_predicted: np.ndarray
    forecast: forecasting.Forecast
    accuracy_percent: float
    growth_percent: float
    fit_summary: dict = field(default_factory=dict)


class _Stage:
    """Tags any library error raised inside the block with the stage name."""

    def __init__(self, name):
        self.name = name

    def __enter__(self):
        log.debug("stage %s", self.name)

    def __exit__(self, exc_type, exc, tb):
        if isinstance(exc, BoxJenkinsError) and exc.stage is None:
            exc.stage = self.name
        return False


def _adf_or_none(x, what):
    try:
        return unitroot.adf_test(x)
    except SeriesTooShort as exc:
        log.warning("no ADF test on %s: %s", what, exc)
        return None


def _choose_d(model_series, config):
    if config.d != "auto":
        d = int(config.d)
        x, _ = difference(model_series, d)
        return d, _adf_or_none(x, f"the d={d} series")
    result = None
    for d in range(3):
        x, _ = difference(model_series, d)
        result = _adf_or_none(x, f"the d={d} series")
        if result is None:
            # too short to test; first differences are the usual choice for trending yearly data
            log.warning("auto-d falls back to d=1")
            return 1, None
        if result.p_value < 0.05:
            return d, result
    log.warning("no d <= 2 passed the ADF check; using d=2")
    return 2, result


def _fit_summary(fit: arima.ArimaFit) -> dict:
    return {
        "model": str(fit.spec),
        "n_obs": fit.n_obs,
        "loglik": fit.loglik,
        "sigma": fit.sigma,
        "aic": fit.aic,
        "bic": fit.bic,
        "hqic": fit.hqic,
        "converged": fit.converged,
        "coefficients": [s for s in fit.inference if s.name != "sigma2"],
    }


def _slice_forecast(fc: forecasting.Forecast, start: int) -> forecasting.Forecast:
    return forecasting.Forecast(
        fc.horizon_years[start:], fc.point[start:], fc.lower[start:], fc.upper[start:],
        fc.point_transformed[start:], fc.se_transformed[start:], fc.confidence,
    )


def run_pipeline(config: RunConfig) -> RunReport:
    with _Stage("ingest"):
        raw = ingest_csv(config.data_path) if config.data_path else load_bundled()
    with _Stage("unit_root"):
        adf_before = _adf_or_none(raw, "the raw series")
    with _Stage("transform"):
        model_series = log_transform(raw) if config.apply_log else raw
    with _Stage("unit_root"):
        d, adf_after = _choose_d(model_series, config)
    with _Stage("correlation"):
        stationary, _ = difference(model_series, d)
        acf = correlation.sample_acf(stationary)
        pacf = correlation.sample_pacf(stationary)
    with _Stage("split"):
        train, test = train_test_split(model_series, config.train_fraction)
        _, test_raw = train_test_split(raw, config.train_fraction)
    with _Stage("grid"):
        grid = selection.grid_search(
            train, d, config.p_max, config.q_max, config.criterion,
            seed=config.seed, n_jobs=config.n_jobs,
        )
        chosen_entry = selection.best_model(grid)
    chosen = chosen_entry.spec
    train_fit = chosen_entry.fit_handle

    with _Stage("forecast"):
        n_test = len(test)
        train_state = TransformState.continuation(train, d, config.apply_log)
        extra = config.horizon if config.fit_scope == "train" else 0
        fc_train = forecasting.forecast(train_fit, train_state, train, n_test + extra, config.confidence)
        predicted = fc_train.point[:n_test]
    with _Stage("fit"):
        if config.fit_scope == "train":
            final_fit = train_fit
            fc = _slice_forecast(fc_train, n_test)
        else:
            final_fit = arima.fit(chosen, model_series, seed=config.seed)
    with _Stage("forecast"):
        if config.fit_scope == "full":
            state = TransformState.continuation(model_series, d, config.apply_log)
            fc = forecasting.forecast(final_fit, state, model_series, config.horizon, config.confidence)
    with _Stage("diagnostics"):
        diag = diagnostics.residual_summary(final_fit)
        roots = arima.polynomial_roots(final_fit.params.ar, "AR") + arima.polynomial_roots(
            final_fit.params.ma, "MA"
        )
    with _Stage("accuracy"):
        acc = forecasting.accuracy(test_raw, predicted)
        growth = forecasting.growth_rate(fc, float(raw.values[-1]))

    return RunReport(
        config=config,
        series=raw,
        adf_before=adf_before,
        adf_after=adf_after,
        d=d,
        acf=acf,
        pacf=pacf,
        grid=grid,
        chosen=chosen,
        fit=final_fit,
        roots=roots,
        diagnostics=diag,
        test=test_raw,
        test_predicted=np.asarray(predicted),
        forecast=fc,
        accuracy_percent=acc,
        growth_percent=growth,
        fit_summary=_fit_summary(final_fit),
    )


# --- serialisation -------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, float) or isinstance(obj, np.floating):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, TimeSeries):
        return {
            "start_year": obj.start_year,
            "scale_tag": obj.scale_tag,
            "units": obj.units,
            "values": _jsonable(obj.values),
        }
    if isinstance(obj, selection.GridEntry):
        return {
            "order": list(obj.order),
            "criterion_value": _jsonable(obj.criterion_value),
            "converged": obj.converged,
            "error": obj.error,
        }
    if isinstance(obj, arima.ArimaFit):
        return {
            "spec": _jsonable(obj.spec),
            "params": _jsonable(obj.params),
            "loglik": _jsonable(obj.loglik),
            "aic": _jsonable(obj.aic),
            "bic": _jsonable(obj.bic),
            "hqic": _jsonable(obj.hqic),
            "n_obs": obj.n_obs,
            "converged": obj.converged,
            "hessian_ok": obj.hessian_ok,
            "std_errors": _jsonable(obj.std_errors),
            "residuals": _jsonable(obj.residuals),
        }
    if is_dataclass(obj):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in fields(obj)}
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def report_to_dict(report: RunReport) -> dict:
    out = _jsonable(report)
    out["chosen"]["order"] = list(report.chosen.order)
    return out


def emit_report(report: RunReport, config: RunConfig | None = None) -> list[Path]:
    """Write report.json, forecast.csv, grid.csv and/or the SVG charts."""
    config = config or report.config
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "json" in config.formats:
        p = out / "report.json"
        p.write_text(json.dumps(report_to_dict(report), indent=2) + "\n", encoding="utf-8")
        written.append(p)
    if "csv" in config.formats:
        p = out / "forecast.csv"
        with p.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["year", "forecast", "lower", "upper"])
            for year, pt, lo, hi in report.forecast.rows():
                w.writerow([year, repr(float(pt)), repr(float(lo)), repr(float(hi))])
        written.append(p)
        p = out / "grid.csv"
        with p.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["p", "d", "q", "aic", "converged"])
            for e in report.grid:
                aic = e.fit_handle.aic if e.fit_handle is not None else math.nan
                w.writerow([*e.order, repr(float(aic)), str(e.converged).lower()])
        written.append(p)
    if "svg" in config.formats:
        from .plots import render_plots

        written.extend(render_plots(report, out))
    return written
