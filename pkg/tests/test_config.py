import pytest

import numpy as np

from swiptrelay.config import DEFAULTS, ScenarioConfig, parse_grid
from swiptrelay.error import ConfigError


def test_empty_config_gives_defaults():
    config = ScenarioConfig.parse("")
    assert config.values == DEFAULTS
    p = config.params()
    assert (p.eta, p.beta, p.k1, p.k2, p.rho, p.R_th) == (0.6, 0.8, 0.1, 0.1, 1e5, 1.0)
    assert p.ch_a.average_power == pytest.approx(5 ** -2.7)
    assert p.ch_d.average_power == pytest.approx(1e-3)


def test_parse_values_and_comments():
    text = """
    # relay closer to S_a
    k_ave = 0.05   # both impairments
    rho_db = 40
    d_ar = 3
    m_b = 3
    engine = both
    """
    config = ScenarioConfig.parse(text, source="scenario.cfg")
    assert config["k1"] == config["k2"] == 0.05
    assert config["rho"] == pytest.approx(1e4)
    assert config["m_b"] == 3 and isinstance(config["m_b"], int)
    assert config["engine"] == "both"
    assert config.geometry().d_ar == 3.0
    assert config.params().ch_b.shape == 3


def test_keys_are_case_sensitive():
    with pytest.raises(ConfigError, match="unknown key 'Rho'"):
        ScenarioConfig.parse("Rho = 1e5")


@pytest.mark.parametrize(
    "text,line,match",
    [
        ("rho = 1\nrho = 2", 2, "duplicate"),
        ("eta = 0.5\nfoo = 1", 2, "unknown key"),
        ("just words", 1, "key = value"),
        ("beta =", 1, "missing value"),
        ("\n\nseed = 1.5", 3, "integer"),
        ("engine = quantum", 1, "engine"),
        ("rho = abc", 1, "bad value"),
        ("rho = 1e5\nrho_db = 50", 2, "both given"),
        ("k_ave = 0.1\nk1 = 0.2", 1, "k_ave"),
    ],
)
def test_config_errors_carry_line(text, line, match):
    with pytest.raises(ConfigError, match=match) as info:
        ScenarioConfig.parse(text, source="bad.cfg")
    assert info.value.line == line
    assert str(info.value).startswith(f"bad.cfg:{line}: ")


def test_invalid_parameter_becomes_config_error():
    with pytest.raises(ConfigError, match="beta"):
        ScenarioConfig.parse("beta = 1.5").params()


def test_read_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        ScenarioConfig.read(tmp_path / "missing.cfg")


def test_read_file(tmp_path):
    path = tmp_path / "scenario.cfg"
    path.write_text("R_th = 0.5\ngrid = 1e3, 1e4\n")
    config = ScenarioConfig.read(path)
    assert config.source == str(path)
    assert config["grid"] == [1e3, 1e4]


@pytest.mark.parametrize(
    "text,expected",
    [
        ("1, 2.5, 1e3", [1.0, 2.5, 1000.0]),
        ("linspace(0, 1, 5)", [0.0, 0.25, 0.5, 0.75, 1.0]),
        ("logspace(3, 5, 3)", [1e3, 1e4, 1e5]),
    ],
)
def test_parse_grid(text, expected):
    assert np.allclose(parse_grid(text), expected)


def test_update_overrides_previous_values():
    config = ScenarioConfig.parse("rho = 1e4").update(["rho=1e6", "k_ave=0"], source="--set")
    assert config["rho"] == 1e6
    assert config["k1"] == 0.0


def test_override_skips_none():
    config = ScenarioConfig().override(seed=7, mc_n=None)
    assert config["seed"] == 7 and config["mc_n"] == DEFAULTS["mc_n"]
    with pytest.raises(ConfigError, match="unknown"):
        ScenarioConfig().override(colour="red")
