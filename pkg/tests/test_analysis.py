import pytest

import numpy as np
import pandas as pd

from swiptrelay.analysis import (
    Engine,
    SweepRow,
    SweepTable,
    apply_axis,
    diversity_slope,
    energy_efficiency,
    fit_loglog_slope,
    optimal_beta,
    optimal_relay_position,
    optimal_snr_ee,
    sweep,
    write_csv,
)
from swiptrelay.analytic import system_outage
from swiptrelay.channel import Geometry
from swiptrelay.error import DomainError
from swiptrelay.system import derive_constants


def test_engine_flags():
    assert Engine.ANALYTIC.analytic and not Engine.ANALYTIC.mc
    assert Engine.MC.mc and not Engine.MC.analytic
    assert Engine("both").analytic and Engine("both").mc


@pytest.mark.parametrize(
    "axis,value,attribute",
    [("rho", 1e4, "rho"), ("beta", 0.3, "beta"), ("R_th", 0.75, "R_th"), ("k_ave", 0.05, "k1")],
)
def test_apply_axis(params, axis, value, attribute):
    assert getattr(apply_axis(params, axis, value), attribute) == value


def test_apply_axis_threshold(params):
    assert derive_constants(apply_axis(params, "gamma_th", 15.0)).gamma_th == pytest.approx(15.0)


def test_apply_axis_moves_relay(params):
    moved = apply_axis(params, "d_ar", 2.0, Geometry())
    assert moved.ch_a.average_power == pytest.approx(2.0 ** -2.7)
    assert moved.ch_b.average_power == pytest.approx(8.0 ** -2.7)
    assert moved.ch_d == params.ch_d


def test_apply_axis_unknown(params):
    with pytest.raises(DomainError, match="unknown sweep axis"):
        apply_axis(params, "eta", 0.5)


def test_sweep_rows_in_grid_order(relaying_params):
    grid = [1e3, 1e4, 1e5]
    table = sweep(relaying_params, "rho", grid)
    assert len(table) == 3
    assert [row.axis_value for row in table] == grid
    assert all(row.p_out_mc is None for row in table)
    assert table[0].p_out_analytic > table[2].p_out_analytic


def test_sweep_workers_give_same_table(relaying_params):
    grid = list(np.logspace(3, 6, 4))
    serial = sweep(relaying_params, "rho", grid, engine="both", mc_n=20_000, seed=1)
    pooled = sweep(relaying_params, "rho", grid, engine="both", mc_n=20_000, seed=1, workers=3)
    pd.testing.assert_frame_equal(serial.to_dataframe(), pooled.to_dataframe())


def test_sweep_records_failed_points(relaying_params):
    table = sweep(relaying_params, "beta", [0.5, 1.0])
    assert table[0].error is None
    assert "beta" in table[1].error
    assert table.failed == [table[1]]


def test_sweep_full_outage_rows(params):
    table = sweep(params.replace(R_th=2.5), "rho", [1e3, 1e5, 1e7])
    assert all(row.p_out_analytic == 1.0 for row in table)
    assert {row.regime for row in table} == {"FullOutage"}


@pytest.mark.parametrize("axis,grid", [("eta", [0.5]), ("rho", [])])
def test_sweep_invalid(params, axis, grid):
    with pytest.raises(DomainError):
        sweep(params, axis, grid)


def test_sweep_table_dataframe(relaying_params):
    df = sweep(relaying_params, "beta", [0.2, 0.8]).assign(curve="a").to_dataframe()
    assert list(df.columns[:4]) == ["curve", "axis", "beta", "p_out_analytic"]
    assert {"gamma_th", "ee", "error"} <= set(df.columns)
    assert (df["curve"] == "a").all()


def test_sweep_table_concat():
    rows = [SweepRow("rho", 1.0, p_out_analytic=0.5)]
    df = SweepTable.concat([SweepTable(rows, {"k": 0}), SweepTable(rows, {"k": 1})])
    assert df["k"].tolist() == [0, 1]


def test_csv_keeps_every_digit(tmp_path):
    df = pd.DataFrame({"x": [1 / 3, 2.0 ** -40, 0.1 + 0.2]})
    path = tmp_path / "table.csv"
    write_csv(df, path)
    assert pd.read_csv(path, float_precision="round_trip")["x"].tolist() == df["x"].tolist()
    assert b"\r\n" not in path.read_bytes()


def test_beta_sweep_is_unimodal(params):
    p = params.replace(R_th=0.5, rho=1e5)
    values = [row.p_out_analytic for row in sweep(p, "beta", np.linspace(0.05, 0.95, 19))]
    i = int(np.argmin(values))
    assert 0 < i < len(values) - 1
    assert np.all(np.diff(values[: i + 1]) <= 0)
    assert np.all(np.diff(values[i:]) >= 0)


def test_energy_efficiency(params):
    p_out = system_outage(params).p_out
    assert energy_efficiency(params) == pytest.approx(3 * (1 - p_out) * params.R_th / (2 * params.P_o))
    assert energy_efficiency(params, p_out=1.0) == 0.0


def test_energy_efficiency_prefers_ideal_hardware(params):
    assert energy_efficiency(params.with_impairment(0.0)) >= energy_efficiency(params)


def test_optimal_beta_interior(params):
    best = optimal_beta(params.replace(R_th=0.5, rho=1e5))
    assert not best.degenerate
    assert 0.01 < best.beta_opt < 0.99
    assert best.p_out_min <= min(best.values)


def test_optimal_beta_degenerate(params):
    best = optimal_beta(params.replace(R_th=1.5))
    assert best.degenerate and best.beta_opt is None


def test_optimal_beta_resolution(params):
    with pytest.raises(DomainError, match="at least 16"):
        optimal_beta(params, resolution=8)


def test_optimal_beta_decreases_with_efficiency(params):
    p = params.replace(R_th=0.5, rho=1e5)
    assert optimal_beta(p.replace(eta=0.9)).beta_opt < optimal_beta(p.replace(eta=0.3)).beta_opt


def test_optimal_relay_position_favours_weaker_terminal(params):
    p = params.replace(R_th=0.5, rho=1e5).with_shapes(m_a=2, m_b=3)
    best = optimal_relay_position(p)
    assert 0 < best.d_ar < 5.0


def test_optimal_snr_ee(params):
    p = params.replace(R_th=0.5)
    best = optimal_snr_ee(p)
    assert 1e2 < best.rho_opt < 1e8
    for rho in (best.rho_opt / 3, best.rho_opt * 3):
        assert energy_efficiency(p.replace(rho=rho)) <= best.ee_max


def test_optimal_snr_ee_domain(params):
    with pytest.raises(DomainError):
        optimal_snr_ee(params, rho_lo=1e4, rho_hi=1e3)


@pytest.mark.parametrize("slope", [0.5, 1.0, 2.0])
def test_fit_loglog_slope_synthetic(slope):
    rho = np.logspace(4, 6, 8)
    assert fit_loglog_slope(rho, 3.0 * rho ** -slope) == pytest.approx(slope)


@pytest.mark.parametrize("rho,p_out", [([1.0], [0.5]), ([1.0, 2.0], [0.5, 0.0]), ([1.0, 2.0], [0.5])])
def test_fit_loglog_slope_domain(rho, p_out):
    with pytest.raises(DomainError):
        fit_loglog_slope(rho, p_out)


@pytest.mark.parametrize("R_th,m_d", [(0.5, 1), (0.5, 2), (1.5, 1), (1.5, 2)])
def test_diversity_slope_matches_direct_link(params, R_th, m_d):
    p = params.with_shapes(m_d=m_d).replace(R_th=R_th)
    fit = diversity_slope(p, (1e7, 1e9))
    assert not fit.full_outage
    assert fit.slope == pytest.approx(m_d, abs=0.15)


def test_diversity_slope_full_outage(params):
    fit = diversity_slope(params.replace(R_th=2.5), (1e4, 1e6))
    assert fit.full_outage and fit.slope == 0.0


def test_diversity_slope_default_window(params):
    fit = diversity_slope(params.replace(rho=1e9), points=4)
    assert fit.rho[0] == pytest.approx(1e9 / 10 ** 1.5)
    assert fit.rho[-1] == pytest.approx(1e9)
    assert fit.slope == pytest.approx(params.ch_d.shape, abs=0.2)


def test_diversity_slope_domain(params):
    with pytest.raises(DomainError):
        diversity_slope(params, (1e6, 1e4))
    with pytest.raises(DomainError):
        diversity_slope(params, points=3)
