"""
Studies built on top of the analytic and Monte Carlo engines: parameter sweeps,
optimal power splitting, relay placement, diversity slope and energy efficiency.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar
from sklearn.linear_model import LinearRegression

from swiptrelay.analytic import Regime, classify_regime, system_outage
from swiptrelay.channel import Geometry
from swiptrelay.error import DomainError, SwiptRelayError
from swiptrelay.montecarlo import estimate_outage_tdbc
from swiptrelay.system import SystemParams, rate_for_threshold

logger = logging.getLogger(__name__)

AXES = ("rho", "beta", "k_ave", "gamma_th", "d_ar", "R_th")


class Engine(Enum):
    ANALYTIC = "analytic"
    MC = "mc"
    BOTH = "both"

    @property
    def analytic(self) -> bool:
        return self is not Engine.MC

    @property
    def mc(self) -> bool:
        return self is not Engine.ANALYTIC


@dataclass(frozen=True)
class SweepRow:
    """
    One grid point of a sweep. A point that could not be evaluated keeps its
    axis value and carries the message in `error`.
    """

    axis_name: str
    axis_value: float
    p_out_analytic: Optional[float] = None
    p_out_mc: Optional[float] = None
    mc_stderr: Optional[float] = None
    regime: Optional[str] = None
    p4_case: Optional[str] = None
    extras: Dict[str, float] = field(default_factory=dict)
    error: Optional[str] = None

    def to_dict(self) -> dict:
        record = {
            "axis": self.axis_name,
            self.axis_name: self.axis_value,
            "p_out_analytic": self.p_out_analytic,
            "p_out_mc": self.p_out_mc,
            "mc_stderr": self.mc_stderr,
            "regime": self.regime,
            "p4_case": self.p4_case,
        }
        record.update(self.extras)
        record["error"] = self.error
        return record


class SweepTable:
    """
    Ordered collection of sweep rows with a few constant label columns, like the
    curve a row belongs to.

    Arguments:
        rows: the rows in grid order
        labels: constant columns prepended to every row

    Usage:

    ```python
    from swiptrelay.analysis import sweep
    from swiptrelay.system import SystemParams

    table = sweep(SystemParams(R_th=0.5), "beta", [0.2, 0.5, 0.8])
    table.assign(curve="default").to_dataframe()
    ```
    """

    def __init__(self, rows: Iterable[SweepRow], labels: Optional[dict] = None):
        self.rows = list(rows)
        self.labels = dict(labels or {})

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __getitem__(self, item):
        return self.rows[item]

    def __repr__(self):
        return f"SweepTable(rows={len(self.rows)}, labels={self.labels})"

    def assign(self, **labels) -> "SweepTable":
        return SweepTable(self.rows, {**self.labels, **labels})

    @property
    def failed(self) -> List[SweepRow]:
        return [row for row in self.rows if row.error is not None]

    def to_dataframe(self) -> pd.DataFrame:
        records = [{**self.labels, **row.to_dict()} for row in self.rows]
        return pd.DataFrame.from_records(records)

    def to_csv(self, path) -> None:
        write_csv(self.to_dataframe(), path)

    @staticmethod
    def concat(tables: Sequence["SweepTable"]) -> pd.DataFrame:
        return pd.concat([t.to_dataframe() for t in tables], ignore_index=True, sort=False)


def write_csv(df: pd.DataFrame, path) -> None:
    """Writes a table with 17 significant digits and LF line endings."""
    df.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")


def apply_axis(p: SystemParams, axis: str, value: float, geometry: Geometry = Geometry()) -> SystemParams:
    """
    Returns the scenario with one swept quantity set to `value`. Moving the relay
    (`d_ar`) keeps `d_ar + d_br` fixed and rebuilds both relay links.
    """
    if axis == "rho":
        return p.replace(rho=value)
    if axis == "beta":
        return p.replace(beta=value)
    if axis == "k_ave":
        return p.with_impairment(value)
    if axis == "gamma_th":
        return p.replace(R_th=rate_for_threshold(value, p.T, 3))
    if axis == "R_th":
        return p.replace(R_th=value)
    if axis == "d_ar":
        ch_a, ch_b, _ = geometry.place_relay(value).channels(
            p.ch_a.shape, p.ch_b.shape, p.ch_d.shape
        )
        return p.replace(ch_a=ch_a, ch_b=ch_b)
    raise DomainError(f"unknown sweep axis {axis!r}, pick one of {', '.join(AXES)}")


def energy_efficiency(p: SystemParams, p_out: Optional[float] = None) -> float:
    """
    Delivered bits per unit energy, `3 (1 - P_out) R_th / (2 P_o)`.

    Arguments:
        p: scenario
        p_out: outage probability to use, defaults to the analytic one
    """
    if p_out is None:
        p_out = system_outage(p).p_out
    return 3.0 * (1.0 - p_out) * p.R_th / (2.0 * p.P_o)


def _evaluate_point(p, axis, value, engine, mc_n, seed, geometry) -> SweepRow:
    try:
        q = apply_axis(p, axis, value, geometry)
        fields = {}
        expected = None
        if engine.analytic:
            result = system_outage(q)
            expected = result.p_out
            fields.update(
                p_out_analytic=result.p_out,
                regime=result.regime.value,
                p4_case=result.p4_case.value,
                extras={
                    "gamma_th": result.gamma_th,
                    "ee": energy_efficiency(q, result.p_out),
                },
            )
        else:
            fields.update(regime=classify_regime(q).value)
        if engine.mc:
            mc = estimate_outage_tdbc(q, mc_n, seed, expected=expected)
            fields.update(p_out_mc=mc.p_hat, mc_stderr=mc.stderr)
        return SweepRow(axis, float(value), **fields)
    except SwiptRelayError as exc:
        logger.warning("%s=%r failed: %s", axis, value, exc)
        return SweepRow(axis, float(value), error=str(exc))


def sweep(
    p: SystemParams,
    axis: str,
    grid: Sequence[float],
    engine=Engine.ANALYTIC,
    mc_n: int = 1_000_000,
    seed: int = 0,
    workers: int = 1,
    geometry: Geometry = Geometry(),
) -> SweepTable:
    """
    Evaluates the outage probability along one axis. Points run concurrently on
    `workers` threads and come back in grid order; every point reuses `seed`.

    Arguments:
        p: base scenario
        axis: one of `rho`, `beta`, `k_ave`, `gamma_th`, `d_ar`, `R_th`
        grid: values of the axis
        engine: `analytic`, `mc` or `both`
        mc_n: draws per point for the Monte Carlo engine
        seed: root seed of every Monte Carlo run
        workers: number of points evaluated at once
        geometry: node placement used by the `d_ar` axis
    """
    if axis not in AXES:
        raise DomainError(f"unknown sweep axis {axis!r}, pick one of {', '.join(AXES)}")
    grid = list(grid)
    if not grid:
        raise DomainError("sweep grid is empty")
    engine = Engine(engine) if not isinstance(engine, Engine) else engine
    logger.info("sweeping %s over %d points (engine=%s)", axis, len(grid), engine.value)

    def run(value):
        return _evaluate_point(p, axis, value, engine, mc_n, seed, geometry)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, grid))
    else:
        rows = [run(value) for value in grid]
    return SweepTable(rows, {})


def _refine(func: Callable[[float], float], grid: np.ndarray, values: np.ndarray) -> Tuple[float, float]:
    """
    Refines the best coarse grid point by golden-section search on the bracket around
    it, falling back to a bounded search at the edges of the grid. Never returns
    something worse than the coarse minimum.
    """
    i = int(np.argmin(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    try:
        if 0 < i < len(grid) - 1 and values[i] < min(values[i - 1], values[i + 1]):
            res = minimize_scalar(func, bracket=(lo, grid[i], hi), method="golden", tol=1e-8)
        else:
            raise ValueError("minimum on a plateau or at the edge of the grid")
    except ValueError:
        res = minimize_scalar(func, bounds=(lo, hi), method="bounded", options={"xatol": 1e-6})
    if lo <= res.x <= hi and res.fun <= values[i]:
        return float(res.x), float(res.fun)
    return float(grid[i]), float(values[i])


@dataclass(frozen=True)
class BetaOptimum:
    """
    Result of the power splitting search. `beta_opt` is `None` when the outage
    probability does not depend on `beta` at all.
    """

    beta_opt: Optional[float]
    p_out_min: float
    degenerate: bool
    grid: Tuple[float, ...] = ()
    values: Tuple[float, ...] = ()


def optimal_beta(p: SystemParams, resolution: int = 32) -> BetaOptimum:
    """
    Minimises the analytic outage probability over the power splitting ratio: a coarse
    grid of `resolution` points on [0.01, 0.99] followed by golden-section refinement.
    """
    if resolution < 16:
        raise DomainError(f"resolution must be at least 16, got {resolution}")
    regime = classify_regime(p)
    if regime is not Regime.COOPERATIVE:
        logger.info("power splitting has no effect in the %s regime", regime.value)
        return BetaOptimum(None, system_outage(p).p_out, True)

    def outage(beta: float) -> float:
        return system_outage(p.replace(beta=float(beta))).p_out

    grid = np.linspace(0.01, 0.99, resolution)
    values = np.array([outage(b) for b in grid])
    beta_opt, p_min = _refine(outage, grid, values)
    return BetaOptimum(beta_opt, p_min, False, tuple(grid), tuple(values))


@dataclass(frozen=True)
class RelayOptimum:
    d_ar: float
    p_out_min: float


def optimal_relay_position(
    p: SystemParams, geometry: Geometry = Geometry(), resolution: int = 19
) -> RelayOptimum:
    """
    Relay position on the line between the terminals that minimises the analytic
    outage probability, keeping the fading shapes of `p`.
    """

    def outage(d_ar: float) -> float:
        return system_outage(apply_axis(p, "d_ar", float(d_ar), geometry)).p_out

    grid = np.linspace(0.05, 0.95, resolution) * geometry.span
    values = np.array([outage(d) for d in grid])
    d_opt, p_min = _refine(outage, grid, values)
    return RelayOptimum(d_opt, p_min)


@dataclass(frozen=True)
class EeOptimum:
    rho_opt: float
    ee_max: float


def optimal_snr_ee(
    p: SystemParams, rho_lo: float = 1e2, rho_hi: float = 1e8, resolution: int = 25
) -> EeOptimum:
    """Transmit SNR maximising the energy efficiency, searched on a log scale."""
    if not 0 < rho_lo < rho_hi:
        raise DomainError(f"need 0 < rho_lo < rho_hi, got ({rho_lo}, {rho_hi})")

    def negative_ee(log_rho: float) -> float:
        return -energy_efficiency(p.replace(rho=10.0 ** float(log_rho)))

    grid = np.linspace(np.log10(rho_lo), np.log10(rho_hi), resolution)
    values = np.array([negative_ee(x) for x in grid])
    log_rho, value = _refine(negative_ee, grid, values)
    return EeOptimum(10.0 ** log_rho, -value)


def fit_loglog_slope(rho: Sequence[float], p_out: Sequence[float]) -> float:
    """Negated least-squares slope of `log10(p_out)` against `log10(rho)`."""
    rho, p_out = np.asarray(rho, dtype=float), np.asarray(p_out, dtype=float)
    if len(rho) != len(p_out) or len(rho) < 2:
        raise DomainError("need at least two matching points to fit a slope")
    if np.any(p_out <= 0) or np.any(rho <= 0):
        raise DomainError("log-log fit needs positive values")
    model = LinearRegression().fit(np.log10(rho).reshape(-1, 1), np.log10(p_out))
    return float(-model.coef_[0])


@dataclass(frozen=True)
class DiversityFit:
    slope: float
    full_outage: bool
    rho: Tuple[float, ...]
    p_out: Tuple[float, ...]


def diversity_slope(
    p: SystemParams, rho_window: Optional[Tuple[float, float]] = None, points: int = 8
) -> DiversityFit:
    """
    Empirical diversity order over a window of transmit SNRs. Without a window the
    top 1.5 decades up to `p.rho` are used.

    Arguments:
        p: scenario
        rho_window: linear `(lo, hi)` SNR window
        points: log-spaced evaluation points, at least 4
    """
    lo, hi = rho_window if rho_window is not None else (p.rho / 10 ** 1.5, p.rho)
    if not 0 < lo < hi:
        raise DomainError(f"invalid SNR window ({lo}, {hi})")
    if points < 4:
        raise DomainError(f"need at least 4 points, got {points}")
    rho = np.logspace(np.log10(lo), np.log10(hi), points)
    p_out = np.array([system_outage(p.replace(rho=float(r))).p_out for r in rho])
    if np.all(p_out >= 1.0):
        return DiversityFit(0.0, True, tuple(rho), tuple(p_out))
    return DiversityFit(fit_loglog_slope(rho, p_out), False, tuple(rho), tuple(p_out))
