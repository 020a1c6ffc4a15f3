import pytest

import numpy as np

from swiptrelay.channel import FadingDraw
from swiptrelay.error import DomainError
from swiptrelay.system import (
    Protocol,
    SystemParams,
    Terminal,
    amplification_gain,
    derive_constants,
    end_to_end_sndrs,
    harvested_energy,
    rate_for_threshold,
    relay_power,
    sndr_direct,
    sndr_relay_mabc,
    sndr_relay_tdbc,
    threshold_sndr,
)


def test_derived_constants(params):
    c = derive_constants(params)
    assert c.I1 == pytest.approx(0.470588, abs=1e-6)
    assert c.I2 == pytest.approx(0.0190118, abs=1e-7)
    assert c.I3 == pytest.approx(4.705882, abs=1e-6)
    assert c.gamma_th == pytest.approx(7.0)
    assert c.I4 == pytest.approx(1 / ((c.I1 - 7 * c.I2) * params.rho))


def test_ceiling_thresholds(params):
    c = derive_constants(params)
    assert c.rcc_threshold == pytest.approx(12.376, abs=1e-3)
    assert c.relay_cutoff == pytest.approx(24.752, abs=1e-3)
    assert c.osc_threshold == pytest.approx(50.0, abs=1e-9)


@pytest.mark.parametrize(
    "k1,k2,eta,beta",
    [(0.1, 0.1, 0.6, 0.8), (0.05, 0.15, 0.3, 0.5), (0.2, 0.01, 0.9, 0.2), (0.01, 0.01, 0.6, 0.95)],
)
def test_relay_cutoff_identity(params, k1, k2, eta, beta):
    p = params.replace(k1=k1, k2=k2, eta=eta, beta=beta)
    s = k1 ** 2 + k2 ** 2
    c = derive_constants(p)
    assert c.relay_cutoff * s * (2 + s) == pytest.approx(1.0, rel=1e-12)
    assert c.rcc_threshold == pytest.approx(c.relay_cutoff / 2, rel=1e-12)


def test_ideal_hardware_has_no_ceilings(ideal_params):
    c = derive_constants(ideal_params)
    assert c.I2 == 0
    assert np.isinf(c.relay_cutoff) and np.isinf(c.rcc_threshold) and np.isinf(c.osc_threshold)
    assert c.I4 > 0


def test_no_curve_beyond_relay_cutoff(params):
    assert derive_constants(params.replace(R_th=1.6)).I4 is None


@pytest.mark.parametrize("protocol,expected", [(Protocol.TDBC, 7.0), (Protocol.MABC, 3.0)])
def test_threshold_depends_on_phases(params, protocol, expected):
    assert derive_constants(params, protocol).gamma_th == pytest.approx(expected)


@pytest.mark.parametrize("R_th,phases", [(0.5, 3), (1.0, 2), (2.5, 3)])
def test_rate_threshold_roundtrip(R_th, phases):
    assert rate_for_threshold(threshold_sndr(R_th, 1.0, phases), 1.0, phases) == pytest.approx(R_th)


def test_rate_for_threshold_domain():
    with pytest.raises(DomainError):
        rate_for_threshold(0.0, 1.0)


@pytest.mark.parametrize(
    "changes,match",
    [
        ({"beta": 1.0}, "beta"),
        ({"beta": 0.0}, "beta"),
        ({"eta": 1.2}, "eta"),
        ({"rho": -1.0}, "rho"),
        ({"k1": -0.1}, "impairment"),
        ({"quadrature_N": 0}, "quadrature_N"),
    ],
)
def test_invalid_params(changes, match):
    with pytest.raises(DomainError, match=match):
        SystemParams(**changes)


def test_with_shapes_keeps_average_power(params):
    reshaped = params.with_shapes(m_a=3, m_d=2)
    assert reshaped.ch_a.shape == 3 and reshaped.ch_b.shape == 2 and reshaped.ch_d.shape == 2
    assert reshaped.ch_a.average_power == pytest.approx(params.ch_a.average_power)
    assert reshaped.ch_d.average_power == pytest.approx(params.ch_d.average_power)


def test_k_ave(params):
    assert params.with_impairment(0.05).k_ave == 0.05
    assert params.replace(k1=0.1, k2=0.2).k_ave is None
    assert params.replace(k1=0.1, k2=0.2).impairment == pytest.approx(0.05)


def test_sndr_direct(params):
    assert sndr_direct(0.0, params) == 0.0
    assert sndr_direct(0.01, params.with_impairment(0.0).replace(rho=100)) == pytest.approx(1.0)
    assert sndr_direct(1.0, params.replace(rho=1e12)) == pytest.approx(50.0, rel=1e-9)


def test_sndr_relay_tdbc_value(ideal_params):
    p = ideal_params.replace(rho=1000)
    draw = FadingDraw(0.01, 0.01, 0.0)
    assert sndr_relay_tdbc(draw, Terminal.A, p) == pytest.approx(0.048 / 1.048, rel=1e-12)
    assert sndr_relay_mabc(draw, Terminal.A, p) == pytest.approx(0.048 / 1.024, rel=1e-12)


@pytest.mark.parametrize("terminal", list(Terminal))
def test_sndr_relay_dead_uplink(params, terminal):
    assert sndr_relay_tdbc(FadingDraw(0.0, 0.3, 0.0), terminal, params) == 0.0
    assert sndr_relay_mabc(FadingDraw(0.3, 0.0, 0.0), terminal, params) == 0.0


def test_sndr_relay_ceiling(params):
    p = params.replace(rho=1e12)
    gamma = sndr_relay_tdbc(FadingDraw(1.0, 1.0, 0.0), Terminal.A, p)
    assert gamma == pytest.approx(derive_constants(p).rcc_threshold, rel=1e-6)


def test_sndr_relay_asymmetric(params):
    draw = FadingDraw(0.02, 0.005, 0.0)
    # the terminal with the weaker own link sees less relay distortion
    assert sndr_relay_tdbc(draw, Terminal.B, params) > sndr_relay_tdbc(draw, Terminal.A, params)


def test_end_to_end_selection_combining(params):
    rng = np.random.default_rng(3)
    draw = FadingDraw(*(ch.sample(rng, size=1000) for ch in (params.ch_a, params.ch_b, params.ch_d)))
    gamma_a, gamma_b = end_to_end_sndrs(draw, params)
    direct = sndr_direct(draw.z, params)
    assert np.all(gamma_a >= direct) and np.all(gamma_b >= direct)
    assert np.all(gamma_a >= sndr_relay_tdbc(draw, Terminal.A, params))


def test_end_to_end_relay_dead(params):
    gamma_a, gamma_b = end_to_end_sndrs(FadingDraw(0.0, 0.0, 0.05), params)
    assert gamma_a == gamma_b == sndr_direct(0.05, params)


def test_relay_power(params):
    p = params.replace(rho=1.0, sigma2=1.0)
    assert relay_power(FadingDraw(0.01, 0.01, 0.0), p) == pytest.approx(0.0096)
    assert relay_power(FadingDraw(0.0, 0.0, 0.0), p) == 0.0


@pytest.mark.parametrize("protocol,slots", [(Protocol.TDBC, 3), (Protocol.MABC, 2)])
def test_harvested_energy(params, protocol, slots):
    p = params.replace(rho=1.0, T=2.0)
    draw = FadingDraw(0.01, 0.01, 0.0)
    assert harvested_energy(draw, p, protocol) == pytest.approx(0.0096 * 2.0 / slots)


def test_harvested_energy_direct(params):
    with pytest.raises(DomainError, match="relay"):
        harvested_energy(FadingDraw(0.01, 0.01, 0.0), params, Protocol.DIRECT)


def test_amplification_gain(ideal_params):
    assert amplification_gain(FadingDraw(0.01, 0.03, 0.0), ideal_params) == pytest.approx(
        np.sqrt(0.48 / 0.2), rel=1e-12
    )
    assert amplification_gain(FadingDraw(0.01, 0.0, 0.0), ideal_params.replace(beta=1e-9)) < 1e-4


def test_amplification_gain_needs_power(params):
    with pytest.raises(DomainError, match="x \\+ y"):
        amplification_gain(FadingDraw(0.0, 0.0, 0.0), params)
