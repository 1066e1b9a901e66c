"""Information-criterion grid search over ARIMA(p, d, q) orders."""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .arima import ArimaFit, ArimaSpec, fit
from .errors import BoxJenkinsError, EmptyGrid, TooFewObservations

log = logging.getLogger(__name__)

CRITERIA = ("AIC", "BIC", "HQIC")


@dataclass(frozen=True)
class GridEntry:
    spec: ArimaSpec
    criterion_value: float
    converged: bool
    fit_handle: ArimaFit | None = None
    error: str | None = None

    @property
    def order(self):
        return self.spec.order

    @property
    def rankable(self) -> bool:
        return self.converged and math.isfinite(self.criterion_value)


def _rank_key(e: GridEntry):
    return (e.criterion_value, e.spec.p + e.spec.q, e.spec.q)


def _fit_cell(args) -> GridEntry:
    spec, data, criterion, seed = args
    try:
        f = fit(spec, data, seed=seed)
    except BoxJenkinsError as exc:
        return GridEntry(spec, math.nan, False, None, f"{type(exc).__name__}: {exc}")
    value = {"AIC": f.aic, "BIC": f.bic, "HQIC": f.hqic}[criterion]
    return GridEntry(spec, value, f.converged, f)


def grid_search(
    data,
    d: int,
    p_max: int = 6,
    q_max: int = 6,
    criterion: str = "AIC",
    *,
    with_constant: bool = True,
    seed: int = 0,
    n_jobs: int = 1,
) -> list[GridEntry]:
    """Fit every (p, q) in [0, p_max] x [0, q_max] and rank them.

    Failed fits are kept as non-converged entries. Converged entries come
    first, ascending in the criterion; the rest follow in (p, q) order.
    ``n_jobs != 1`` spreads the fits over worker processes; the result does
    not depend on completion order.
    """
    criterion = criterion.upper()
    if criterion not in CRITERIA:
        raise ValueError(f"criterion must be one of {CRITERIA}")
    if p_max < 0 or q_max < 0:
        raise ValueError("p_max and q_max must be non-negative")
    n_eff = len(data) - d
    k_max = int(with_constant) + p_max + q_max + 1
    if n_eff <= k_max + 5:
        raise TooFewObservations(
            f"largest grid model needs more than {k_max + 5} differenced points, have {n_eff}"
        )
    jobs = [
        (ArimaSpec(p, d, q, with_constant), data, criterion, seed)
        for p in range(p_max + 1)
        for q in range(q_max + 1)
    ]
    if n_jobs == 1:
        entries = [_fit_cell(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=None if n_jobs < 0 else n_jobs) as pool:
            entries = list(pool.map(_fit_cell, jobs))
    for e in entries:
        if e.error:
            log.info("%s failed: %s", e.spec, e.error)
    if all(e.fit_handle is None for e in entries):
        raise EmptyGrid("every fit in the grid failed")
    ranked = sorted((e for e in entries if e.rankable), key=_rank_key)
    rest = sorted((e for e in entries if not e.rankable), key=lambda e: e.order)
    return ranked + rest


def best_model(entries) -> GridEntry:
    """Converged entry with the smallest criterion; ties go to fewer parameters, then smaller q."""
    ok = [e for e in entries if e.rankable]
    if not ok:
        raise EmptyGrid("no converged entry to choose from")
    return min(ok, key=_rank_key)
