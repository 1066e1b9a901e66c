import numpy as np
import pytest

from boxjenkins import arima, pipeline
from boxjenkins.series import log_transform, train_test_split

ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    """Print and keep one PASS/FAIL line for the acceptance summary."""
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion:>2}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def raw_series():
    return pipeline.load_bundled()


@pytest.fixture(scope="session")
def log_train(raw_series):
    train, _ = train_test_split(log_transform(raw_series), 0.7)
    return train


@pytest.fixture(scope="session")
def fit_016(log_train):
    return arima.fit(arima.ArimaSpec(0, 1, 6), log_train, seed=42)


@pytest.fixture(scope="session")
def default_report(tmp_path_factory):
    """The default pipeline run on the bundled data (full 7x7 grid)."""
    out = tmp_path_factory.mktemp("default_run")
    cfg = pipeline.RunConfig(out_dir=str(out))
    report = pipeline.run_pipeline(cfg)
    pipeline.emit_report(report, cfg)
    return report, out


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
