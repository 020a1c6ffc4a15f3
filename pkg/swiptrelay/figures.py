"""
Presets that regenerate the data behind the outage, diversity, power splitting,
relay placement and energy efficiency plots. Every preset starts from the scenario
in the config, pins the parameters its plot is defined by and returns one long
table with a column per varied label.
"""
import logging
from typing import Callable, Dict, Iterable, Tuple

import numpy as np
import pandas as pd

from swiptrelay.analysis import (
    SweepTable,
    diversity_slope,
    optimal_beta,
    optimal_relay_position,
    optimal_snr_ee,
    sweep,
)
from swiptrelay.analytic import diversity_gain, hi_ceiling_levels, system_outage
from swiptrelay.config import ScenarioConfig
from swiptrelay.error import DomainError
from swiptrelay.montecarlo import estimate_outage, relative_error
from swiptrelay.system import Protocol

logger = logging.getLogger(__name__)

RHO_GRID = tuple(np.logspace(3, 7, 17))
SHAPES = ((1, 1), (2, 2), (3, 3))


def _run(config: ScenarioConfig, p, axis, grid) -> SweepTable:
    return sweep(
        p,
        axis,
        grid,
        engine=config["engine"],
        mc_n=config["mc_n"],
        seed=config["seed"],
        workers=config["workers"],
        geometry=config.geometry(),
    )


def outage_vs_snr(config: ScenarioConfig) -> pd.DataFrame:
    """Outage probability against transmit SNR for several rate thresholds."""
    base = config.params().with_shapes(2, 2, 1)
    tables = [
        _run(config, base.replace(R_th=r), "rho", RHO_GRID).assign(R_th=r)
        for r in (1.0, 1.5, 1.75, 2.0)
    ]
    return SweepTable.concat(tables)


def quadrature_error(config: ScenarioConfig) -> pd.DataFrame:
    """
    Relative error of the closed form against simulation as the quadrature order
    grows, at a transmit SNR of 40 dB.
    """
    base = config.params().with_shapes(2, 2, 1).replace(rho=1e4)
    records = []
    for r in (0.5, 0.75, 1.0):
        p = base.replace(R_th=r)
        mc = estimate_outage(
            p, Protocol.TDBC, config["mc_n"], config["seed"], workers=config["workers"]
        )
        for n in (2, 4, 8, 16, 32, 64):
            p_out = system_outage(p.replace(quadrature_N=n)).p_out
            records.append(
                {
                    "N": n,
                    "R_th": r,
                    "p_out_analytic": p_out,
                    "p_out_mc": mc.p_hat,
                    "mc_stderr": mc.stderr,
                    "delta": relative_error(p_out, mc),
                }
            )
    return pd.DataFrame.from_records(records)


def protocol_comparison(config: ScenarioConfig) -> pd.DataFrame:
    """
    Simulated outage of TDBC, MABC and direct transmission under equal energy per
    terminal, with and without impairments, next to the TDBC closed form.
    """
    base = config.params().replace(R_th=0.5)
    records = []
    for k in (0.0, 0.1):
        for m in SHAPES:
            p_shape = base.with_impairment(k).with_shapes(m[0], m[1], 1)
            for rho in RHO_GRID:
                p = p_shape.replace(rho=float(rho))
                analytic = system_outage(p).p_out
                for protocol in Protocol:
                    mc = estimate_outage(
                        p,
                        protocol,
                        config["mc_n"],
                        config["seed"],
                        workers=config["workers"],
                        expected=analytic if protocol is Protocol.TDBC else None,
                    )
                    records.append(
                        {
                            "protocol": protocol.value,
                            "k_ave": k,
                            "m_a": m[0],
                            "m_b": m[1],
                            "rho": float(rho),
                            "p_out_mc": mc.p_hat,
                            "mc_stderr": mc.stderr,
                            "p_out_analytic": analytic if protocol is Protocol.TDBC else np.nan,
                        }
                    )
    return pd.DataFrame.from_records(records)


def diversity_curves(config: ScenarioConfig) -> pd.DataFrame:
    """High-SNR behaviour for thresholds below, between and above the ceilings."""
    base = config.params().with_shapes(2, 2, 1)
    tables = []
    for r in (0.5, 1.5, 2.5):
        p = base.replace(R_th=r)
        fit = diversity_slope(p, (10 ** 5.5, 10 ** 7))
        tables.append(
            _run(config, p, "rho", RHO_GRID).assign(
                R_th=r, diversity_gain=diversity_gain(p), diversity_slope=fit.slope
            )
        )
    return SweepTable.concat(tables)


def outage_vs_beta(config: ScenarioConfig) -> pd.DataFrame:
    """Outage against the power splitting ratio, with the optimum of each curve."""
    base = config.params().replace(R_th=0.5, rho=1e5)
    grid = np.linspace(0.05, 0.95, 19)
    tables = []
    for k in (0.0, 0.1):
        for m in SHAPES:
            p = base.with_impairment(k).with_shapes(m[0], m[1], 1)
            best = optimal_beta(p)
            tables.append(
                _run(config, p, "beta", grid).assign(
                    k_ave=k, m_a=m[0], m_b=m[1], beta_opt=best.beta_opt
                )
            )
    return SweepTable.concat(tables)


def outage_vs_impairment(config: ScenarioConfig) -> pd.DataFrame:
    """Outage against the impairment level, with both ceiling levels marked."""
    base = config.params().replace(R_th=1.5)
    grid = np.linspace(0.0, 0.2, 41)
    k_rcc, k_osc = hi_ceiling_levels(base)
    tables = [
        _run(config, base.with_shapes(m[0], m[1], 1), "k_ave", grid).assign(
            m_a=m[0], m_b=m[1], k_rcc=k_rcc, k_osc=k_osc
        )
        for m in SHAPES
    ]
    return SweepTable.concat(tables)


def outage_vs_threshold(config: ScenarioConfig) -> pd.DataFrame:
    """Outage against the SNDR threshold at 50 dB for several impairment levels."""
    base = config.params().with_shapes(2, 2, 1).replace(rho=1e5)
    grid = np.linspace(0.5, 40.0, 80)
    tables = [
        _run(config, base.with_impairment(k), "gamma_th", grid).assign(k_ave=k)
        for k in (0.0, 0.1, 0.15)
    ]
    return SweepTable.concat(tables)


def outage_vs_relay_position(config: ScenarioConfig) -> pd.DataFrame:
    """Outage as the relay moves between the terminals, for asymmetric fading."""
    base = config.params().replace(R_th=0.5, rho=1e5)
    geometry = config.geometry()
    grid = np.linspace(0.05, 0.95, 19) * geometry.span
    tables = []
    for m_a, m_b in ((2, 3), (3, 2), (2, 2)):
        p = base.with_shapes(m_a, m_b, 1)
        best = optimal_relay_position(p, geometry)
        tables.append(
            _run(config, p, "d_ar", grid).assign(m_a=m_a, m_b=m_b, d_opt=best.d_ar)
        )
    return SweepTable.concat(tables)


def optimal_beta_vs_position(config: ScenarioConfig) -> pd.DataFrame:
    """Optimal power splitting ratio as the relay moves, for several efficiencies."""
    base = config.params().replace(R_th=0.5, rho=1e5)
    geometry = config.geometry()
    records = []
    for eta in (0.3, 0.6, 0.9):
        for d_ar in np.linspace(0.1, 0.9, 9) * geometry.span:
            ch_a, ch_b, _ = geometry.place_relay(float(d_ar)).channels(
                base.ch_a.shape, base.ch_b.shape, base.ch_d.shape
            )
            best = optimal_beta(base.replace(eta=eta, ch_a=ch_a, ch_b=ch_b))
            records.append(
                {
                    "eta": eta,
                    "d_ar": float(d_ar),
                    "beta_opt": best.beta_opt,
                    "p_out_min": best.p_out_min,
                    "degenerate": best.degenerate,
                }
            )
    return pd.DataFrame.from_records(records)


def energy_efficiency_vs_snr(config: ScenarioConfig) -> pd.DataFrame:
    """Energy efficiency against transmit SNR with the optimal SNR of each curve."""
    base = config.params().with_shapes(2, 2, 1)
    grid = np.logspace(2, 7, 26)
    tables = []
    for r in (0.5, 1.0):
        for k in (0.0, 0.1):
            p = base.replace(R_th=r).with_impairment(k)
            best = optimal_snr_ee(p)
            tables.append(
                _run(config, p, "rho", grid).assign(
                    R_th=r, k_ave=k, rho_opt=best.rho_opt, ee_max=best.ee_max
                )
            )
    return SweepTable.concat(tables)


FIGURES: Dict[str, Callable[[ScenarioConfig], pd.DataFrame]] = {
    "fig4a": outage_vs_snr,
    "fig4b": quadrature_error,
    "fig5": protocol_comparison,
    "fig6": diversity_curves,
    "fig7": outage_vs_beta,
    "fig8": outage_vs_impairment,
    "fig9": outage_vs_threshold,
    "fig10": outage_vs_relay_position,
    "fig11": optimal_beta_vs_position,
    "fig12": energy_efficiency_vs_snr,
}


def figure_ids() -> Tuple[str, ...]:
    return tuple(FIGURES)


def run_figure(fig_id: str, config: ScenarioConfig = None) -> pd.DataFrame:
    """
    Builds the table of a figure preset.

    Arguments:
        fig_id: one of `fig4a`, `fig4b`, `fig5` ... `fig12`
        config: base scenario and run controls, defaults when omitted
    """
    if fig_id not in FIGURES:
        raise DomainError(f"unknown figure {fig_id!r}, pick one of {', '.join(FIGURES)}")
    config = config or ScenarioConfig()
    logger.info("building %s (engine=%s, seed=%d)", fig_id, config["engine"], config["seed"])
    df = FIGURES[fig_id](config)
    logger.info("%s: %d rows", fig_id, len(df))
    return df


def describe(ids: Iterable[str] = None) -> Dict[str, str]:
    """First docstring line of each preset."""
    ids = ids or FIGURES
    return {i: FIGURES[i].__doc__.strip().splitlines()[0] for i in ids}
