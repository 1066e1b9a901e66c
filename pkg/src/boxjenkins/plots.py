"""Self-contained SVG charts for a pipeline run (no plotting dependency)."""
from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 800, 500
_FONT = 'font-family="sans-serif" font-size="11"'


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _nice_ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 10))
        t += step
    return ticks


class Panel:
    """A rectangular plotting area with linear x/y scales."""

    def __init__(self, x0, y0, w, h, xlim, ylim, title=""):
        self.x0, self.y0, self.w, self.h = x0, y0, w, h
        xl, xh = xlim
        yl, yh = ylim
        if xh <= xl:
            xl, xh = xl - 0.5, xh + 0.5
        if yh <= yl:
            yl, yh = yl - 0.5, yh + 0.5
        self.xlim, self.ylim = (xl, xh), (yl, yh)
        self.title = title
        self.parts = []

    def sx(self, x):
        xl, xh = self.xlim
        return self.x0 + (x - xl) / (xh - xl) * self.w

    def sy(self, y):
        yl, yh = self.ylim
        return self.y0 + self.h - (y - yl) / (yh - yl) * self.h

    def frame(self, xlabel="", ylabel=""):
        p = self.parts
        p.append(f'<rect x="{self.x0}" y="{self.y0}" width="{self.w}" height="{self.h}" '
                 f'fill="none" stroke="#444" stroke-width="1"/>')
        for t in _nice_ticks(*self.xlim):
            x = self.sx(t)
            p.append(f'<line x1="{_fmt(x)}" y1="{self.y0 + self.h}" x2="{_fmt(x)}" '
                     f'y2="{self.y0 + self.h + 4}" stroke="#444"/>')
            p.append(f'<text x="{_fmt(x)}" y="{self.y0 + self.h + 16}" text-anchor="middle" '
                     f'{_FONT}>{escape(f"{t:g}")}</text>')
        for t in _nice_ticks(*self.ylim):
            y = self.sy(t)
            p.append(f'<line x1="{self.x0 - 4}" y1="{_fmt(y)}" x2="{self.x0}" y2="{_fmt(y)}" stroke="#444"/>')
            p.append(f'<text x="{self.x0 - 6}" y="{_fmt(y + 4)}" text-anchor="end" '
                     f'{_FONT}>{escape(f"{t:g}")}</text>')
        if self.title:
            p.append(f'<text x="{self.x0 + self.w / 2}" y="{self.y0 - 8}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="13" font-weight="bold">{escape(self.title)}</text>')
        if xlabel:
            p.append(f'<text x="{self.x0 + self.w / 2}" y="{self.y0 + self.h + 32}" '
                     f'text-anchor="middle" {_FONT}>{escape(xlabel)}</text>')
        if ylabel:
            cx, cy = self.x0 - 42, self.y0 + self.h / 2
            p.append(f'<text x="{cx}" y="{cy}" text-anchor="middle" transform="rotate(-90 {cx} {cy})" '
                     f'{_FONT}>{escape(ylabel)}</text>')

    def line(self, xs, ys, color="#1f77b4", width=1.5, dash=None, cls="series"):
        pts = " ".join(f"{_fmt(self.sx(x))},{_fmt(self.sy(y))}" for x, y in zip(xs, ys))
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(f'<polyline class="{cls}" points="{pts}" fill="none" stroke="{color}" '
                          f'stroke-width="{width}"{extra}/>')

    def hline(self, y, color="#888", dash="4,3"):
        self.parts.append(f'<line x1="{self.x0}" y1="{_fmt(self.sy(y))}" x2="{self.x0 + self.w}" '
                          f'y2="{_fmt(self.sy(y))}" stroke="{color}" stroke-dasharray="{dash}"/>')

    def stems(self, lags, values, band=None, color="#1f77b4"):
        if band is not None:
            top, bot = self.sy(band), self.sy(-band)
            self.parts.append(f'<rect class="band" x="{self.x0}" y="{_fmt(top)}" width="{self.w}" '
                              f'height="{_fmt(bot - top)}" fill="#1f77b4" fill-opacity="0.12"/>')
        self.hline(0.0, "#444", "none")
        for k, v in zip(lags, values):
            x = _fmt(self.sx(k))
            self.parts.append(f'<line class="stem" x1="{x}" y1="{_fmt(self.sy(0.0))}" x2="{x}" '
                              f'y2="{_fmt(self.sy(v))}" stroke="{color}" stroke-width="2"/>')
            self.parts.append(f'<circle cx="{x}" cy="{_fmt(self.sy(v))}" r="3" fill="{color}"/>')

    def points(self, xs, ys, color="#1f77b4", r=2.5):
        for x, y in zip(xs, ys):
            self.parts.append(f'<circle cx="{_fmt(self.sx(x))}" cy="{_fmt(self.sy(y))}" r="{r}" fill="{color}"/>')

    def bars(self, edges, counts, color="#1f77b4"):
        for lo, hi, c in zip(edges[:-1], edges[1:], counts):
            x, w = self.sx(lo), self.sx(hi) - self.sx(lo)
            y = self.sy(c)
            self.parts.append(f'<rect class="bar" x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" '
                              f'height="{_fmt(self.sy(0) - y)}" fill="{color}" fill-opacity="0.7" stroke="#fff"/>')

    def polygon(self, xs, ys, color="#1f77b4", opacity=0.2):
        pts = " ".join(f"{_fmt(self.sx(x))},{_fmt(self.sy(y))}" for x, y in zip(xs, ys))
        self.parts.append(f'<polygon class="fan" points="{pts}" fill="{color}" fill-opacity="{opacity}" stroke="none"/>')

    def legend(self, items):
        for i, (label, color) in enumerate(items):
            y = self.y0 + 14 + 16 * i
            x = self.x0 + 12
            self.parts.append(f'<line x1="{x}" y1="{y}" x2="{x + 22}" y2="{y}" stroke="{color}" stroke-width="2"/>')
            self.parts.append(f'<text x="{x + 28}" y="{y + 4}" {_FONT}>{escape(label)}</text>')


def _document(panels, title=""):
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<title>{escape(title)}</title>')
    for p in panels:
        out.extend(p.parts)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _span(*arrays, pad=0.05):
    vals = np.concatenate([np.asarray(a, dtype=float).ravel() for a in arrays])
    lo, hi = float(vals.min()), float(vals.max())
    r = hi - lo if hi > lo else 1.0
    return lo - pad * r, hi + pad * r


def trend_svg(series) -> str:
    years, vals = series.years, series.values
    p = Panel(80, 50, 680, 380, (years[0], years[-1]), _span(vals), "Military expenditure")
    p.frame("Year", series.units)
    p.line(years, vals)
    return _document([p], "trend")


def correlogram_svg(acf, pacf) -> str:
    panels = []
    for i, (pts, name) in enumerate(((acf, "ACF"), (pacf, "PACF"))):
        lags = [pt.lag for pt in pts]
        vals = [pt.value for pt in pts]
        band = pts[0].band_halfwidth
        lo = min(min(vals), -band, 0.0)
        p = Panel(80, 40 + i * 235, 680, 170, (-0.5, lags[-1] + 0.5), (lo - 0.05, 1.05), name)
        p.frame("Lag" if i == 1 else "")
        p.stems(lags, vals, band)
        panels.append(p)
    return _document(panels, "correlogram")


def predicted_vs_actual_svg(series, test, predicted) -> str:
    p = Panel(80, 50, 680, 380, (series.years[0], series.years[-1]),
              _span(series.values, predicted), "Predicted vs actual (test period)")
    p.frame("Year", series.units)
    p.line(series.years, series.values, "#333", 1.2)
    p.line(test.years, predicted, "#d62728", 2.0, dash="6,3")
    p.legend([("actual", "#333"), ("predicted", "#d62728")])
    return _document([p], "predicted vs actual")


def residuals_svg(diag) -> str:
    res = diag.residuals
    e = res.values
    trace = Panel(70, 40, 300, 170, (res.years[0], res.years[-1]), _span(e), "Residuals")
    trace.frame()
    trace.hline(0.0)
    trace.line(res.years, e)

    h = diag.histogram
    hist = Panel(460, 40, 300, 170, (h.edges[0], h.edges[-1]), (0, max(h.counts.max(), 1) * 1.1), "Histogram")
    hist.frame()
    hist.bars(h.edges, h.counts)

    qq = diag.qq_points
    lim = _span(qq[:, 0], qq[:, 1])
    qqp = Panel(70, 280, 300, 170, lim, lim, "Normal Q-Q")
    qqp.frame("theoretical", "standardized")
    qqp.line(lim, lim, "#888", 1.0, dash="4,3", cls="reference")
    qqp.points(qq[:, 0], qq[:, 1])

    racf = diag.residual_acf
    vals = [pt.value for pt in racf]
    band = racf[0].band_halfwidth
    ap = Panel(460, 280, 300, 170, (-0.5, racf[-1].lag + 0.5), (min(min(vals), -band) - 0.05, 1.05), "Residual ACF")
    ap.frame("Lag")
    ap.stems([pt.lag for pt in racf], vals, band)
    return _document([trace, hist, qqp, ap], "residual diagnostics")


def forecast_fan_svg(series, fc) -> str:
    """History, point forecast and the shaded interval.

    The band polygon starts at the last observation, runs along the upper
    bound and returns along the lower bound: 2*h + 2 vertices.
    """
    x_last, y_last = series.end_year, float(series.values[-1])
    fy = np.asarray(fc.horizon_years, dtype=float)
    xs = np.concatenate(([x_last], fy, fy[::-1], [x_last]))
    ys = np.concatenate(([y_last], fc.upper, fc.lower[::-1], [y_last]))
    p = Panel(80, 50, 680, 380, (series.years[0], fy[-1]), _span(series.values, fc.upper, fc.lower),
              f"Forecast with {fc.confidence:.0%} interval")
    p.frame("Year", series.units)
    p.polygon(xs, ys)
    p.line(series.years, series.values, "#333", 1.2)
    p.line(np.concatenate(([x_last], fy)), np.concatenate(([y_last], fc.point)), "#1f77b4", 2.0, dash="6,3")
    return _document([p], "forecast fan")


def render_plots(report, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    charts = {
        "trend.svg": trend_svg(report.series),
        "correlogram.svg": correlogram_svg(report.acf, report.pacf),
        "predicted_vs_actual.svg": predicted_vs_actual_svg(report.series, report.test, report.test_predicted),
        "residuals.svg": residuals_svg(report.diagnostics),
        "forecast_fan.svg": forecast_fan_svg(report.series, report.forecast),
    }
    written = []
    for name, text in charts.items():
        path = out / name
        path.write_text(text, encoding="utf-8")
        written.append(path)
    return written
