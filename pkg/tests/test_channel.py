import pytest

import numpy as np
from scipy import stats
from scipy.integrate import quad

from swiptrelay.channel import (
    FadingDraw,
    GammaChannel,
    Geometry,
    channel_from_geometry,
    gain_cdf,
    gain_pdf,
    sample_gain,
)
from swiptrelay.error import DomainError


@pytest.mark.parametrize(
    "shape,scale,v,expected",
    [(1, 1.0, 0.5, np.exp(-0.5)), (2, 0.5, 1.0, 4 * np.exp(-2))],
)
def test_pdf_values(shape, scale, v, expected):
    assert gain_pdf(GammaChannel(shape, scale), v) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("shape,scale", [(1, 1.0), (2, 0.0065), (3, 2.0), (1.5, 0.3)])
def test_pdf_normalised(shape, scale):
    ch = GammaChannel(shape, scale)
    total, _ = quad(ch.pdf, 0, 200 * scale, limit=200)
    assert total == pytest.approx(1.0, rel=1e-8)


@pytest.mark.parametrize("shape,scale", [(1, 1.0), (2, 0.0065), (3, 2.0), (1.5, 0.3)])
def test_pdf_is_derivative_of_cdf(shape, scale):
    ch = GammaChannel(shape, scale)
    v = np.linspace(0.2, 4.0, 12) * ch.average_power
    h = 1e-6 * ch.average_power
    slope = (ch.cdf(v + h) - ch.cdf(v - h)) / (2 * h)
    assert np.allclose(slope, ch.pdf(v), rtol=1e-6)


def test_pdf_domain():

    with pytest.raises(DomainError, match="positive"):
        GammaChannel(1, 1.0).pdf(0.0)


@pytest.mark.parametrize(
    "shape,scale,v,expected",
    [(1, 2.0, 2.0, 1 - np.exp(-1)), (2, 1.0, 1.0, 1 - 2 / np.e), (3, 0.1, 0.0, 0.0)],
)
def test_cdf_values(shape, scale, v, expected):
    assert gain_cdf(GammaChannel(shape, scale), v) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("shape", [1, 2, 3, 0.7, 2.5])
def test_cdf_matches_scipy(shape):
    ch = GammaChannel(shape, 0.4)
    v = np.linspace(0.0, 5.0, 21)
    assert np.allclose(ch.cdf(v), stats.gamma(shape, scale=0.4).cdf(v), atol=1e-13)
    assert np.allclose(ch.sf(v), 1 - ch.cdf(v), atol=1e-13)
    assert np.all(np.diff(ch.cdf(v)) >= 0)


def test_cdf_domain():
    with pytest.raises(DomainError):
        GammaChannel(2, 1.0).cdf(-0.5)


@pytest.mark.parametrize("shape,scale", [(0.4, 1.0), (1, 0.0), (1, -1.0), (np.nan, 1.0)])
def test_invalid_channel(shape, scale):
    with pytest.raises(DomainError):
        GammaChannel(shape, scale)


def test_integer_shape_required_for_closed_forms():
    assert GammaChannel(2.0, 1.0).m == 2
    with pytest.raises(DomainError, match="integer"):
        GammaChannel(1.5, 1.0).m


def test_sample_mean():
    rng = np.random.default_rng(42)
    draws = sample_gain(GammaChannel(1, 1.0), rng, size=1_000_000)
    assert draws.mean() == pytest.approx(1.0, abs=0.005)


def test_sample_variance():
    rng = np.random.default_rng(42)
    draws = sample_gain(GammaChannel(3, 2.0), rng, size=1_000_000)
    assert draws.var() == pytest.approx(12.0, abs=0.15)


@pytest.mark.parametrize("shape", [1, 2, 3, 1.5])
def test_sample_scales_with_average_power(shape):
    base = GammaChannel.from_average_power(shape, 5 ** -2.7)
    doubled = GammaChannel.from_average_power(shape, 2 * 5 ** -2.7)
    a = base.sample(np.random.default_rng(11), size=1000)
    b = doubled.sample(np.random.default_rng(11), size=1000)
    assert np.allclose(b, 2 * a, rtol=1e-14)


@pytest.mark.parametrize("shape", [1, 2, 3])
def test_sample_follows_cdf(shape):

    ch = GammaChannel.from_average_power(shape, 5 ** -2.7)
    draws = ch.sample(np.random.default_rng(7), size=100_000)
    assert stats.kstest(draws, ch.cdf).pvalue > 0.001


@pytest.mark.parametrize(
    "d,alpha,m,omega",
    [(5, 2.7, 2, 5 ** -2.7), (10, 3, 1, 1e-3), (1, 2.7, 1, 1.0), (1, 3.0, 1, 1.0)],
)
def test_channel_from_geometry(d, alpha, m, omega):
    ch = channel_from_geometry(d, alpha, m)
    assert ch.average_power == pytest.approx(omega, rel=1e-12)
    assert ch.scale == pytest.approx(omega / m, rel=1e-12)


def test_channel_from_geometry_values():
    ch_a, ch_b, ch_d = Geometry().channels(2, 2, 1)
    assert ch_a.average_power == pytest.approx(5 ** -2.7, rel=1e-12)
    assert ch_b.average_power == pytest.approx(5 ** -2.7, rel=1e-12)
    assert ch_d.average_power == pytest.approx(10 ** -3.0, rel=1e-12)



@pytest.mark.parametrize("d,alpha", [(0, 2.7), (-1, 2.7), (5, 0)])
def test_channel_from_geometry_domain(d, alpha):
    with pytest.raises(DomainError):
        channel_from_geometry(d, alpha, 1)


def test_geometry_place_relay_keeps_span():
    moved = Geometry().place_relay(3.0)
    assert (moved.d_ar, moved.d_br, moved.span) == (3.0, 7.0, 10.0)
    ch_a, ch_b, ch_d = moved.channels(2, 3, 1)
    assert ch_a.average_power > ch_b.average_power
    assert ch_d.average_power == pytest.approx(1e-3)


@pytest.mark.parametrize("d_ar", [0.0, 10.0, 12.0])
def test_geometry_place_relay_domain(d_ar):
    with pytest.raises(DomainError, match="relay position"):
        Geometry().place_relay(d_ar)


def test_fading_draw_rejects_negative_gains():
    with pytest.raises(DomainError, match="gain y"):
        FadingDraw(x=1.0, y=np.array([0.1, -0.1]), z=0.0)
