"""
Scenario files. A scenario is a flat list of `key = value` lines; `#` starts a
comment, blank lines are ignored and keys are case-sensitive. Keys ending in `_db`
are given in decibels and converted to linear scale while parsing, so that nothing
downstream ever sees a dB value.

```
# relay halfway, impaired transceivers
k_ave  = 0.1
rho_db = 50
R_th   = 0.5
grid   = logspace(3, 7, 17)
```
"""
import logging
import pathlib
import re
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from swiptrelay.channel import Geometry
from swiptrelay.error import ConfigError, SwiptRelayError
from swiptrelay.system import SystemParams

logger = logging.getLogger(__name__)

DEFAULTS = {
    "k1": 0.1,
    "k2": 0.1,
    "eta": 0.6,
    "beta": 0.8,
    "rho": 1e5,
    "sigma2": 1.0,
    "T": 1.0,
    "R_th": 1.0,
    "m_a": 2,
    "m_b": 2,
    "m_d": 1,
    "d_ar": 5.0,
    "d_br": 5.0,
    "d_ab": 10.0,
    "alpha1": 2.7,
    "alpha2": 3.0,
    "quadrature_N": 32,
    "engine": "analytic",
    "mc_n": 1_000_000,
    "seed": 0,
    "workers": 1,
    "axis": "rho",
    "grid": None,
    "out": None,
}

FLOAT_KEYS = {
    "k1", "k2", "eta", "beta", "rho", "sigma2", "T", "R_th",
    "d_ar", "d_br", "d_ab", "alpha1", "alpha2",
}
SHAPE_KEYS = {"m_a", "m_b", "m_d"}
INT_KEYS = {"quadrature_N", "mc_n", "seed", "workers"}
DB_KEYS = {"rho_db": "rho", "sigma2_db": "sigma2"}
ENGINES = ("analytic", "mc", "both")

_LINE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*?)\s*$")
_SPACED = re.compile(r"^(linspace|logspace)\(\s*([^,]+?)\s*,\s*([^,]+?)\s*,\s*(\d+)\s*\)$")


def parse_grid(text: str) -> List[float]:
    """
    Parses a grid given as a comma separated list, `linspace(a, b, n)` or
    `logspace(a, b, n)` where `a` and `b` are decimal exponents.
    """
    match = _SPACED.match(text.strip())
    if match:
        kind, a, b, n = match.groups()
        space = np.linspace if kind == "linspace" else np.logspace
        return [float(v) for v in space(float(a), float(b), int(n))]
    values = [float(v) for v in text.split(",") if v.strip()]
    if not values:
        raise ValueError("empty grid")
    return values


def _convert(key: str, raw: str):
    if key in FLOAT_KEYS:
        return float(raw)
    if key in SHAPE_KEYS:
        value = float(raw)
        return int(value) if value.is_integer() else value
    if key in INT_KEYS:
        value = float(raw)
        if not value.is_integer():
            raise ValueError(f"expected an integer, got {raw}")
        return int(value)
    if key == "engine":
        if raw not in ENGINES:
            raise ValueError(f"engine must be one of {', '.join(ENGINES)}")
        return raw
    if key == "grid":
        return parse_grid(raw)
    return raw


class ScenarioConfig:
    """
    Parsed scenario with every missing key filled from the defaults.

    Arguments:
        values: mapping from key to typed value
        source: name used in error messages

    Usage:

    ```python
    from swiptrelay.config import ScenarioConfig

    config = ScenarioConfig.parse("k_ave = 0.05\\nrho_db = 40\\n", source="inline")
    config.params().rho, config["k1"]
    ```
    """

    def __init__(self, values: Optional[Dict] = None, source: str = "<defaults>"):
        self.values = {**DEFAULTS, **(values or {})}
        self.source = source

    def __getitem__(self, key):
        return self.values[key]

    def __repr__(self):
        return f"ScenarioConfig(source={self.source!r})"

    @classmethod
    def parse(cls, text: str, source: str = "<config>") -> "ScenarioConfig":
        return cls(source=source).update(text.splitlines(), source=source)

    @classmethod
    def read(cls, path) -> "ScenarioConfig":
        path = pathlib.Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read scenario file: {exc.strerror}", source=str(path))
        return cls.parse(text, source=str(path))

    def update(self, lines: Iterable[str], source: Optional[str] = None) -> "ScenarioConfig":
        """
        Returns a new config with `lines` applied on top of this one. Within `lines`
        a key may appear only once.
        """
        source = source or self.source
        parsed: Dict[str, Tuple[object, int]] = {}
        for number, line in enumerate(lines, start=1):
            content = line.split("#", 1)[0]
            if not content.strip():
                continue
            match = _LINE.match(content)
            if not match:
                raise ConfigError(f"expected 'key = value', got {line.strip()!r}", number, source)
            key, raw = match.groups()
            if key in parsed:
                raise ConfigError(f"duplicate key {key!r}", number, source)
            if key not in DEFAULTS and key not in DB_KEYS and key != "k_ave":
                raise ConfigError(f"unknown key {key!r}", number, source)
            if raw == "":
                raise ConfigError(f"missing value for {key!r}", number, source)
            try:
                if key in DB_KEYS:
                    value = 10.0 ** (float(raw) / 10.0)
                elif key == "k_ave":
                    value = float(raw)
                else:
                    value = _convert(key, raw)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r}: {exc}", number, source)
            parsed[key] = (value, number)

        for linear_key in DB_KEYS.values():
            db_key = f"{linear_key}_db"
            if linear_key in parsed and db_key in parsed:
                raise ConfigError(
                    f"{linear_key!r} and {db_key!r} both given", parsed[db_key][1], source
                )
        if "k_ave" in parsed and ("k1" in parsed or "k2" in parsed):
            raise ConfigError("'k_ave' cannot be combined with 'k1'/'k2'", parsed["k_ave"][1], source)

        values = dict(self.values)
        for key, (value, _) in parsed.items():
            if key == "k_ave":
                values["k1"] = values["k2"] = value
            elif key in DB_KEYS:
                values[DB_KEYS[key]] = value
            else:
                values[key] = value
        logger.debug("scenario %s sets %s", source, sorted(parsed))
        return ScenarioConfig(values, source)

    def override(self, **values) -> "ScenarioConfig":
        """Typed overrides, `None` values are skipped."""
        unknown = set(values) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown keys {sorted(unknown)}", source=self.source)
        changes = {k: v for k, v in values.items() if v is not None}
        return ScenarioConfig({**self.values, **changes}, self.source)

    def geometry(self) -> Geometry:
        v = self.values
        return Geometry(v["d_ar"], v["d_br"], v["d_ab"], v["alpha1"], v["alpha2"])

    def params(self) -> SystemParams:
        v = self.values
        try:
            return SystemParams.from_geometry(
                self.geometry(),
                m_a=v["m_a"],
                m_b=v["m_b"],
                m_d=v["m_d"],
                k1=v["k1"],
                k2=v["k2"],
                eta=v["eta"],
                beta=v["beta"],
                rho=v["rho"],
                sigma2=v["sigma2"],
                T=v["T"],
                R_th=v["R_th"],
                quadrature_N=v["quadrature_N"],
            )
        except SwiptRelayError as exc:
            raise ConfigError(str(exc), source=self.source)
