"""
Scenario parameters, derived constants and the per-draw SNDR models of the
power-splitting two-way amplify-and-forward relay with impaired transceivers.
"""
import dataclasses
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from swiptrelay.channel import FadingDraw, GammaChannel, Geometry
from swiptrelay.error import DomainError

logger = logging.getLogger(__name__)


class Protocol(Enum):
    TDBC = "tdbc"
    MABC = "mabc"
    DIRECT = "direct"

    @property
    def phases(self) -> int:
        return 3 if self is Protocol.TDBC else 2

    @property
    def power_factor(self) -> float:
        """
        Transmit power relative to `P_o` that gives every terminal the energy
        `P_o T / 3` it spends under TDBC.
        """
        return 1.0 if self is Protocol.TDBC else 2.0 / 3.0


class Terminal(Enum):
    A = "a"
    B = "b"


def _default_channels():
    return Geometry().channels(2, 2, 1)


@dataclass(frozen=True)
class SystemParams:
    """
    All inputs of a scenario. Every quantity is linear; dB only exists at the
    configuration boundary.

    Arguments:
        k1: transmitter impairment level
        k2: receiver impairment level
        eta: energy conversion efficiency in (0, 1)
        beta: power splitting ratio in (0, 1)
        rho: transmit SNR `P_o / sigma2`
        sigma2: noise power
        T: block duration in seconds
        R_th: rate threshold in bit/s/Hz
        ch_a: gain of the S_a - R link
        ch_b: gain of the S_b - R link
        ch_d: gain of the S_a - S_b link
        quadrature_N: Gauss-Chebyshev order used by the joint outage term

    Usage:

    ```python
    from swiptrelay.channel import Geometry
    from swiptrelay.system import SystemParams

    params = SystemParams.from_geometry(Geometry(d_ar=3, d_br=7), m_a=2, m_b=3, m_d=1, R_th=0.5)
    params.replace(rho=1e4).k_ave
    ```
    """

    k1: float = 0.1
    k2: float = 0.1
    eta: float = 0.6
    beta: float = 0.8
    rho: float = 1e5
    sigma2: float = 1.0
    T: float = 1.0
    R_th: float = 1.0
    ch_a: GammaChannel = field(default_factory=lambda: _default_channels()[0])
    ch_b: GammaChannel = field(default_factory=lambda: _default_channels()[1])
    ch_d: GammaChannel = field(default_factory=lambda: _default_channels()[2])
    quadrature_N: int = 32

    def __post_init__(self):
        if self.k1 < 0 or self.k2 < 0:
            raise DomainError(f"impairment levels must be nonnegative, got ({self.k1}, {self.k2})")
        if not 0 < self.eta < 1:
            raise DomainError(f"eta must lie in (0, 1), got {self.eta}")
        if not 0 < self.beta < 1:
            raise DomainError(f"beta must lie in (0, 1), got {self.beta}")
        for name in ("rho", "sigma2", "T", "R_th"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise DomainError(f"{name} must be positive and finite, got {value}")
        if int(self.quadrature_N) != self.quadrature_N or self.quadrature_N < 1:
            raise DomainError(f"quadrature_N must be a positive integer, got {self.quadrature_N}")

    @classmethod
    def from_geometry(cls, geometry: Geometry, m_a=2, m_b=2, m_d=1, **kwargs) -> "SystemParams":
        ch_a, ch_b, ch_d = geometry.channels(m_a, m_b, m_d)
        return cls(ch_a=ch_a, ch_b=ch_b, ch_d=ch_d, **kwargs)

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    def with_impairment(self, k: float) -> "SystemParams":
        """Sets `k1 = k2 = k`."""
        return self.replace(k1=k, k2=k)

    def with_shapes(self, m_a=None, m_b=None, m_d=None) -> "SystemParams":
        """Changes fading shapes while keeping the average powers."""
        def reshape(ch, m):
            return ch if m is None else GammaChannel.from_average_power(m, ch.average_power)

        return self.replace(
            ch_a=reshape(self.ch_a, m_a), ch_b=reshape(self.ch_b, m_b), ch_d=reshape(self.ch_d, m_d)
        )

    @property
    def impairment(self) -> float:
        """Aggregate impairment `k1^2 + k2^2`."""
        return self.k1 ** 2 + self.k2 ** 2

    @property
    def k_ave(self) -> Optional[float]:
        return self.k1 if self.k1 == self.k2 else None

    @property
    def P_o(self) -> float:
        return self.rho * self.sigma2


@dataclass(frozen=True)
class DerivedConstants:
    """
    Constants shared by every closed-form term. `I4` is `None` whenever the
    threshold reaches the relay cutoff `I1/I2`, where it would not be positive.
    """

    I1: float
    I2: float
    I3: float
    I4: Optional[float]
    gamma_th: float
    rcc_threshold: float
    relay_cutoff: float
    osc_threshold: float


def threshold_sndr(R_th: float, T: float, phases: int = 3) -> float:
    """SNDR needed to carry `R_th` when the block is split into `phases` slots."""
    return 2.0 ** (phases * R_th / T) - 1.0


def rate_for_threshold(gamma_th: float, T: float, phases: int = 3) -> float:
    """Inverse of [threshold_sndr][swiptrelay.system.threshold_sndr]."""
    if gamma_th <= 0:
        raise DomainError(f"SNDR threshold must be positive, got {gamma_th}")
    return T * np.log2(1.0 + gamma_th) / phases


def _impairment_constants(p: SystemParams) -> Tuple[float, float, float]:
    s = p.impairment
    i1 = p.eta * p.beta / (1.0 + s)
    i2 = p.eta * p.beta * (s / (1.0 + s) + s)
    i3 = 2.0 * p.eta * p.beta / ((1.0 - p.beta) * (1.0 + s))
    return i1, i2, i3


def derive_constants(p: SystemParams, protocol: Protocol = Protocol.TDBC) -> DerivedConstants:
    i1, i2, i3 = _impairment_constants(p)
    gamma_th = threshold_sndr(p.R_th, p.T, protocol.phases)
    if i2 > 0:
        relay_cutoff = i1 / i2
        rcc_threshold = i1 / (2.0 * i2)
        osc_threshold = 1.0 / p.impairment
    else:
        relay_cutoff = rcc_threshold = osc_threshold = np.inf
    i4 = 1.0 / ((i1 - gamma_th * i2) * p.rho) if gamma_th < relay_cutoff else None
    return DerivedConstants(
        I1=i1,
        I2=i2,
        I3=i3,
        I4=i4,
        gamma_th=gamma_th,
        rcc_threshold=rcc_threshold,
        relay_cutoff=relay_cutoff,
        osc_threshold=osc_threshold,
    )


def sndr_direct(z, p: SystemParams):
    """SNDR of the terminal-to-terminal link, `rho z / ((k1^2 + k2^2) rho z + 1)`."""
    z = np.asarray(z, dtype=float)
    return _unwrap(p.rho * z / (p.impairment * p.rho * z + 1.0))


def _sndr_relay(draw: FadingDraw, terminal: Terminal, p: SystemParams, own_weight: float):
    i1, i2, i3 = _impairment_constants(p)
    x = np.asarray(draw.x, dtype=float)
    y = np.asarray(draw.y, dtype=float)
    own = x if terminal is Terminal.A else y
    numerator = i1 * p.rho * x * y
    denominator = i2 * p.rho * own * (x + y) + own_weight * i3 * own + 1.0
    return _unwrap(numerator / denominator)


def sndr_relay_tdbc(draw: FadingDraw, terminal: Terminal, p: SystemParams):
    """
    SNDR of the relayed signal received by `terminal` under TDBC. At S_a this is
    `I1 rho x y / (I2 rho x (x + y) + I3 x + 1)`; S_b swaps the role of `x` and `y`
    in the denominator.
    """
    return _sndr_relay(draw, terminal, p, own_weight=1.0)


def sndr_relay_mabc(draw: FadingDraw, terminal: Terminal, p: SystemParams):
    """As [sndr_relay_tdbc][swiptrelay.system.sndr_relay_tdbc] with half the `I3` term."""
    return _sndr_relay(draw, terminal, p, own_weight=0.5)


def end_to_end_sndrs(draw: FadingDraw, p: SystemParams):
    """
    Selection combining at both terminals. The direct link is reciprocal so both
    terminals compare their relayed SNDR against the same direct SNDR.
    """
    direct = sndr_direct(draw.z, p)
    gamma_a = np.maximum(direct, sndr_relay_tdbc(draw, Terminal.A, p))
    gamma_b = np.maximum(direct, sndr_relay_tdbc(draw, Terminal.B, p))
    return _unwrap(gamma_a), _unwrap(gamma_b)


def relay_power(draw: FadingDraw, p: SystemParams):
    """Relay transmit power `eta beta P_o (x + y)` funded by the harvested energy."""
    total = np.asarray(draw.x, dtype=float) + np.asarray(draw.y, dtype=float)
    return _unwrap(p.eta * p.beta * p.P_o * total)


def harvested_energy(draw: FadingDraw, p: SystemParams, protocol: Protocol = Protocol.TDBC):
    """
    Energy the relay harvests in one block. The relay listens for two of three slots
    under TDBC and one of two under MABC, and spends it in a single slot.
    """
    if protocol is Protocol.DIRECT:
        raise DomainError("direct transmission does not use the relay")
    return _unwrap(np.asarray(relay_power(draw, p)) * p.T / protocol.phases)


def amplification_gain(draw: FadingDraw, p: SystemParams) -> float:
    """
    Relay amplification factor. The harvested power scales with `x + y`, which
    cancels, leaving `sqrt(eta beta / ((1 - beta)(1 + k1^2 + k2^2)))`.
    """
    total = np.asarray(draw.x, dtype=float) + np.asarray(draw.y, dtype=float)
    if np.any(total <= 0):
        raise DomainError("amplification needs harvested power, got x + y = 0")
    scale = (1.0 - p.beta) * (1.0 + p.impairment)
    gain = np.sqrt(np.asarray(relay_power(draw, p)) / (scale * p.P_o * total))
    closed_form = np.sqrt(p.eta * p.beta / scale)
    assert np.allclose(gain, closed_form, rtol=1e-12), "harvested power must cancel"
    return float(closed_form)


def _unwrap(value):
    return float(value) if np.ndim(value) == 0 else value


class Link(Enum):
    """Single-direction outage events that make up the system outage."""

    DIRECT_LINK = "DirectLink"
    RELAY_TO_A = "RelayToA"
    RELAY_TO_B = "RelayToB"
    JOINT_RELAY = "JointRelay"
