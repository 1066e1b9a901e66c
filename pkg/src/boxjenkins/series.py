"""Yearly series container and the invertible log/differencing pipeline."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateSplit,
    NonPositiveValue,
    SeriesTooShort,
    StateMismatch,
)

ORIGINAL = "original"
LOG = "log"
# unitless data with no positivity requirement (simulations, residuals)
LEVEL = "level"
_DIFF_TAG = re.compile(r"^diff\((\d+)\)-of-(log|original|level)$")


def diff_tag(k: int, base: str) -> str:
    return f"diff({k})-of-{base}"


def parse_tag(tag: str) -> tuple[int, str]:
    """Split a scale tag into ``(differencing order, base scale)``."""
    if tag in (ORIGINAL, LOG, LEVEL):
        return 0, tag
    m = _DIFF_TAG.match(tag)
    if m is None:
        raise ValueError(f"unknown scale tag {tag!r}")
    return int(m.group(1)), m.group(2)


def _readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Contiguous yearly observations; ``values[i]`` belongs to ``start_year + i``."""

    start_year: int
    values: np.ndarray
    scale_tag: str = ORIGINAL
    units: str = "US$ billions"

    def __post_init__(self):
        arr = _readonly(self.values)
        if arr.size == 0:
            raise SeriesTooShort("a series needs at least one observation")
        if not np.all(np.isfinite(arr)):
            raise ValueError("series values must be finite")
        parse_tag(self.scale_tag)
        if self.scale_tag == ORIGINAL:
            bad = np.flatnonzero(arr <= 0)
            if bad.size:
                raise NonPositiveValue(int(bad[0]), float(arr[bad[0]]))
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "start_year", int(self.start_year))

    def __len__(self):
        return self.values.size

    @property
    def years(self) -> np.ndarray:
        return np.arange(self.start_year, self.start_year + len(self))

    @property
    def end_year(self) -> int:
        return self.start_year + len(self) - 1

    def with_values(self, values, start_year=None, scale_tag=None) -> "TimeSeries":
        return TimeSeries(
            self.start_year if start_year is None else start_year,
            values,
            self.scale_tag if scale_tag is None else scale_tag,
            self.units,
        )


@dataclass(frozen=True)
class TransformState:
    """What :func:`integrate` needs to undo ``d`` differencing passes.

    ``stored_heads[k]`` is a value of the ``k``-times differenced series. With
    ``anchor="leading"`` they are the first values (exact inverse of
    :func:`difference`); with ``anchor="trailing"`` they are the last observed
    values and integration continues the series forward, as for forecasts.
    """

    log_applied: bool
    d: int
    stored_heads: tuple = field(default_factory=tuple)
    anchor: str = "leading"

    def __post_init__(self):
        object.__setattr__(self, "stored_heads", tuple(float(h) for h in self.stored_heads))
        if self.anchor not in ("leading", "trailing"):
            raise ValueError("anchor must be 'leading' or 'trailing'")

    @classmethod
    def continuation(cls, s: TimeSeries | np.ndarray, d: int, log_applied: bool) -> "TransformState":
        """State that extends ``s`` (already on the modeling scale) past its last value."""
        x = np.asarray(s.values if isinstance(s, TimeSeries) else s, dtype=float)
        if x.size <= d:
            raise SeriesTooShort(f"need more than {d} values to continue a d={d} series")
        heads = []
        for _ in range(d):
            heads.append(x[-1])
            x = np.diff(x)
        return cls(log_applied=log_applied, d=d, stored_heads=heads, anchor="trailing")


def log_transform(s: TimeSeries) -> TimeSeries:
    if s.scale_tag not in (ORIGINAL, LEVEL):
        raise ValueError(f"log_transform expects an undifferenced, unlogged series, got {s.scale_tag!r}")
    bad = np.flatnonzero(s.values <= 0)
    if bad.size:
        raise NonPositiveValue(int(bad[0]), float(s.values[bad[0]]))
    return TimeSeries(s.start_year, np.log(s.values), LOG, "log " + s.units)


def difference(s: TimeSeries, d: int = 1) -> tuple[TimeSeries, TransformState]:
    if d < 0:
        raise ValueError("differencing order must be non-negative")
    if len(s) <= d:
        raise SeriesTooShort(f"cannot difference {len(s)} values {d} times")
    k0, base = parse_tag(s.scale_tag)
    x = s.values
    heads = []
    for _ in range(d):
        heads.append(x[0])
        x = np.diff(x)
    tag = s.scale_tag if d == 0 else diff_tag(k0 + d, base)
    state = TransformState(log_applied=(base == LOG), d=d, stored_heads=heads)
    return TimeSeries(s.start_year + d, x, tag, s.units), state


def integrate(diffed: TimeSeries, state: TransformState) -> TimeSeries:
    """Undo :func:`difference`, then exponentiate if the state records a log."""
    if len(state.stored_heads) != state.d:
        raise StateMismatch(
            f"state has d={state.d} but {len(state.stored_heads)} stored heads"
        )
    k, base = parse_tag(diffed.scale_tag)
    if state.d > k and not (k == 0 and state.d == 0):
        raise StateMismatch(f"series is differenced {k} times, state wants to undo {state.d}")
    x = np.asarray(diffed.values, dtype=float)
    for head in reversed(state.stored_heads):
        if state.anchor == "leading":
            x = np.concatenate(([head], head + np.cumsum(x)))
        else:
            x = head + np.cumsum(x)
    k_left = k - state.d
    tag = diff_tag(k_left, base) if k_left else base
    units = diffed.units
    if state.log_applied:
        if k_left:
            raise StateMismatch("cannot exponentiate a series that is still differenced")
        x = np.exp(x)
        tag = ORIGINAL
        units = units[4:] if units.startswith("log ") else units
    start = diffed.start_year - state.d if state.anchor == "leading" else diffed.start_year
    return TimeSeries(start, x, tag, units)


def train_test_split(s: TimeSeries, train_fraction: float = 0.7) -> tuple[TimeSeries, TimeSeries]:
    """Chronological split; the training part gets ``floor(train_fraction * n)`` points."""
    if not 0.0 < train_fraction < 1.0:
        raise DegenerateSplit(f"train_fraction must lie in (0, 1), got {train_fraction}")
    n = len(s)
    n_train = math.floor(train_fraction * n + 1e-9)
    if n_train < 1 or n_train >= n:
        raise DegenerateSplit(f"split of {n} points at {train_fraction} leaves an empty part")
    train = s.with_values(s.values[:n_train])
    test = s.with_values(s.values[n_train:], start_year=s.start_year + n_train)
    return train, test
