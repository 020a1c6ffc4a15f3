"""
Squared-envelope gains of Nakagami-m fading links. The gain of each link is a
gamma random variable with shape `m` and scale `theta = Omega / m`.
"""
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy import special

from swiptrelay.error import DomainError
from swiptrelay.specfun import lower_incomplete_gamma_int, upper_incomplete_gamma_int

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class GammaChannel:
    """
    Gamma distributed channel gain, the square of a Nakagami-m envelope.

    Arguments:
        shape: fading parameter `m`; integers for the closed forms, any real >= 0.5 for sampling
        scale: scale parameter `theta`, the average power is `shape * scale`

    Usage:

    ```python
    import numpy as np
    from swiptrelay.channel import GammaChannel

    ch = GammaChannel.from_average_power(2, 5 ** -2.7)
    ch.cdf(ch.average_power)
    ch.sample(np.random.default_rng(0), size=4)
    ```
    """

    shape: float
    scale: float

    def __post_init__(self):
        if not np.isfinite(self.shape) or self.shape < 0.5:
            raise DomainError(f"fading shape must be at least 0.5, got {self.shape}")
        if not np.isfinite(self.scale) or self.scale <= 0:
            raise DomainError(f"scale must be positive, got {self.scale}")

    @classmethod
    def from_average_power(cls, shape: float, average_power: float) -> "GammaChannel":
        if average_power <= 0:
            raise DomainError(f"average power must be positive, got {average_power}")
        return cls(shape=shape, scale=average_power / shape)

    @property
    def average_power(self) -> float:
        return self.shape * self.scale

    @property
    def is_integer_shape(self) -> bool:
        return float(self.shape).is_integer()

    @property
    def m(self) -> int:
        """Integer shape, as required by the finite sums of the closed forms."""
        if not self.is_integer_shape:
            raise DomainError(
                f"closed-form expressions need an integer shape, got {self.shape}"
            )
        return int(self.shape)

    def pdf(self, v: ArrayLike) -> ArrayLike:
        v = np.asarray(v, dtype=float)
        if np.any(v <= 0):
            raise DomainError("the gain density is only defined for positive gains")
        log_pdf = (
            (self.shape - 1) * np.log(v)
            - v / self.scale
            - special.gammaln(self.shape)
            - self.shape * np.log(self.scale)
        )
        return _unwrap(np.exp(log_pdf))

    def cdf(self, v: ArrayLike) -> ArrayLike:
        v = np.asarray(v, dtype=float)
        if np.any(v < 0):
            raise DomainError("the gain distribution is only defined for nonnegative gains")
        if self.is_integer_shape:
            return _unwrap(
                np.asarray(lower_incomplete_gamma_int(self.m, v / self.scale))
                / special.gamma(self.m)
            )
        return _unwrap(special.gammainc(self.shape, v / self.scale))

    def sf(self, v: ArrayLike) -> ArrayLike:
        """Survival function `1 - cdf`, computed directly to keep tail precision."""
        v = np.asarray(v, dtype=float)
        if np.any(v < 0):
            raise DomainError("the gain distribution is only defined for nonnegative gains")
        if self.is_integer_shape:
            return _unwrap(
                np.asarray(upper_incomplete_gamma_int(self.m, v / self.scale))
                / special.gamma(self.m)
            )
        return _unwrap(special.gammaincc(self.shape, v / self.scale))

    def sample(self, rng: np.random.Generator, size: Optional[int] = None) -> ArrayLike:
        """
        Draws i.i.d. gains with the gamma sampler of numpy, which is exact for every
        shape (Marsaglia-Tsang squeeze with a boost below shape 1).
        """
        return rng.gamma(self.shape, self.scale, size=size)


@dataclass(frozen=True)
class FadingDraw:
    """
    One realisation (or a batch of realisations) of the three gains:
    `x = |h_ar|^2`, `y = |h_br|^2` and `z = |h_ab|^2`.
    """

    x: ArrayLike
    y: ArrayLike
    z: ArrayLike

    def __post_init__(self):
        for name in ("x", "y", "z"):
            if np.any(np.asarray(getattr(self, name)) < 0):
                raise DomainError(f"channel gain {name} must be nonnegative")


@dataclass(frozen=True)
class Geometry:
    """
    Node placement and path loss. Average powers follow `Omega = d^-alpha`, with
    `alpha1` on the relay links and `alpha2` on the direct link.
    """

    d_ar: float = 5.0
    d_br: float = 5.0
    d_ab: float = 10.0
    alpha1: float = 2.7
    alpha2: float = 3.0

    @property
    def span(self) -> float:
        return self.d_ar + self.d_br

    def place_relay(self, d_ar: float) -> "Geometry":
        """Moves the relay along the line, keeping `d_ar + d_br` fixed."""
        if not 0 < d_ar < self.span:
            raise DomainError(f"relay position must lie in (0, {self.span}), got {d_ar}")
        return Geometry(d_ar, self.span - d_ar, self.d_ab, self.alpha1, self.alpha2)

    def channels(self, m_a: float, m_b: float, m_d: float) -> Tuple[GammaChannel, ...]:
        return (
            channel_from_geometry(self.d_ar, self.alpha1, m_a),
            channel_from_geometry(self.d_br, self.alpha1, m_b),
            channel_from_geometry(self.d_ab, self.alpha2, m_d),
        )


def _unwrap(value):
    return float(value) if np.ndim(value) == 0 else value


def gain_pdf(ch: GammaChannel, v: ArrayLike) -> ArrayLike:
    return ch.pdf(v)


def gain_cdf(ch: GammaChannel, v: ArrayLike) -> ArrayLike:
    return ch.cdf(v)


def sample_gain(ch: GammaChannel, rng: np.random.Generator, size: Optional[int] = None) -> ArrayLike:
    return ch.sample(rng, size=size)


def channel_from_geometry(d: float, alpha: float, m: float) -> GammaChannel:
    """
    Builds the gain distribution of a link of length `d` meters with path loss
    exponent `alpha`, so that `Omega = d^-alpha` and `theta = Omega / m`.
    """
    if d <= 0:
        raise DomainError(f"distance must be positive, got {d}")
    if alpha <= 0:
        raise DomainError(f"path loss exponent must be positive, got {alpha}")
    return GammaChannel.from_average_power(m, float(d) ** (-alpha))
