"""Box-Jenkins ARIMA modelling for short yearly series.

Exact Gaussian likelihood via a Kalman filter, augmented Dickey-Fuller
testing, information-criterion order search, residual diagnostics and
log-scale forecast intervals.
"""
from .arima import ArimaFit, ArimaParams, ArimaSpec, fit, kalman_loglik, polynomial_roots, std_errors
from .correlation import CorrelogramPoint, sample_acf, sample_pacf
from .diagnostics import DiagnosticsReport, ljung_box, residual_summary
from .errors import BoxJenkinsError, DataError, ModelingError
from .forecasting import Forecast, accuracy, forecast, growth_rate
from .pipeline import RunConfig, RunReport, emit_report, ingest_csv, load_bundled, run_pipeline
from .selection import GridEntry, best_model, grid_search
from .series import TimeSeries, TransformState, difference, integrate, log_transform, train_test_split
from .unitroot import AdfResult, adf_test

__version__ = "0.1.0"

__all__ = [
    "AdfResult", "ArimaFit", "ArimaParams", "ArimaSpec", "BoxJenkinsError", "CorrelogramPoint",
    "DataError", "DiagnosticsReport", "Forecast", "GridEntry", "ModelingError", "RunConfig",
    "RunReport", "TimeSeries", "TransformState", "accuracy", "adf_test", "best_model",
    "difference", "emit_report", "fit", "forecast", "grid_search", "growth_rate", "ingest_csv",
    "integrate", "kalman_loglik", "ljung_box", "load_bundled", "log_transform", "polynomial_roots",
    "residual_summary", "run_pipeline", "sample_acf", "sample_pacf", "std_errors", "train_test_split",
]
