"""``forecast`` command line entry point."""
from __future__ import annotations

import argparse
import logging
import sys

from .errors import DataError, ModelingError
from .pipeline import FORMATS, RunConfig, emit_report, run_pipeline

EXIT_OK, EXIT_DATA, EXIT_MODEL = 0, 2, 3


def _d_arg(text):
    if text == "auto":
        return "auto"
    if text in ("0", "1", "2"):
        return int(text)
    raise argparse.ArgumentTypeError("--d must be auto, 0, 1 or 2")


def _formats(text):
    items = tuple(t.strip().lower() for t in text.split(",") if t.strip())
    bad = [t for t in items if t not in FORMATS]
    if bad or not items:
        raise argparse.ArgumentTypeError(f"formats must be a subset of {','.join(FORMATS)}")
    return items


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="forecast", description="Box-Jenkins ARIMA workflow on a yearly series.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run the full pipeline and write the report")
    run.add_argument("--data", default=None, help="CSV with header year,value (default: bundled dataset)")
    run.add_argument("--train-frac", type=float, default=0.7)
    run.add_argument("--no-log", action="store_true", help="model the raw series instead of its log")
    run.add_argument("--d", type=_d_arg, default="auto")
    run.add_argument("--max-p", type=int, default=6)
    run.add_argument("--max-q", type=int, default=6)
    run.add_argument("--criterion", choices=["aic", "bic", "hqic"], default="aic")
    run.add_argument("--horizon", type=int, default=5)
    run.add_argument("--confidence", type=float, default=0.95)
    run.add_argument("--out", default="out")
    run.add_argument("--format", type=_formats, default=FORMATS)
    run.add_argument("--seed", type=int, default=42)
    run.add_argument("--fit-scope", choices=["train", "full"], default="train")
    run.add_argument("--jobs", type=int, default=1, help="worker processes for the grid (-1: all cores)")
    run.add_argument("-v", "--verbose", action="store_true")
    return parser


def _summary(report) -> str:
    fs = report.fit_summary
    lines = []
    if report.adf_before is not None:
        lines.append(
            f"ADF raw series:      stat {report.adf_before.statistic:.3f}  p {report.adf_before.p_value:.4g}"
        )
    if report.adf_after is not None:
        lines.append(
            f"ADF d={report.d} series:    stat {report.adf_after.statistic:.3f}  p {report.adf_after.p_value:.4g}"
        )
    lines += [
        f"chosen model:        {fs['model']}  ({report.config.criterion} {report.grid[0].criterion_value:.3f})",
        f"log likelihood:      {fs['loglik']:.3f}   sigma {fs['sigma']:.4f}",
        f"test accuracy:       {report.accuracy_percent:.2f}%",
        f"growth to {report.forecast.horizon_years[-1]}:      {report.growth_percent:.2f}%",
        "",
        "year   forecast     lower      upper",
    ]
    for year, pt, lo, hi in report.forecast.rows():
        lines.append(f"{year}  {pt:9.2f}  {lo:9.2f}  {hi:9.2f}")
    return "\n".join(lines)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        config = RunConfig(
            data_path=args.data,
            train_fraction=args.train_frac,
            apply_log=not args.no_log,
            d=args.d,
            p_max=args.max_p,
            q_max=args.max_q,
            criterion=args.criterion.upper(),
            horizon=args.horizon,
            confidence=args.confidence,
            out_dir=args.out,
            formats=args.format,
            seed=args.seed,
            fit_scope=args.fit_scope,
            n_jobs=args.jobs,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    try:
        report = run_pipeline(config)
        emit_report(report, config)
    except DataError as exc:
        print(f"data error [{exc.stage}]: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ModelingError as exc:
        print(f"modeling error [{exc.stage}]: {exc}", file=sys.stderr)
        return EXIT_MODEL
    print(_summary(report))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
