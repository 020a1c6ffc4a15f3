from abc import ABC, abstractmethod
from typing import Tuple

import numpy as np

from swiptrelay.channel import FadingDraw
from swiptrelay.system import Protocol, SystemParams, threshold_sndr


class Scheme(ABC):
    """
    This is the abstract base class for all the two-way transmission schemes. Each
    subclass sets its `protocol` and implements `sndrs`, which maps a batch of fading
    draws to the end-to-end SNDR at both terminals.
    """

    protocol: Protocol

    def __call__(self, draw: FadingDraw, p: SystemParams) -> np.ndarray:
        return self.outage(draw, p)

    def effective_params(self, p: SystemParams) -> SystemParams:
        """Scenario with the transmit power rescaled to the scheme's energy budget."""
        if self.protocol.power_factor == 1.0:
            return p
        return p.replace(rho=p.rho * self.protocol.power_factor)

    def threshold(self, p: SystemParams) -> float:
        return threshold_sndr(p.R_th, p.T, self.protocol.phases)

    def outage(self, draw: FadingDraw, p: SystemParams) -> np.ndarray:
        """
        Boolean outage indicator per draw: either direction misses the threshold.

        Arguments:
            draw: batch of fading gains
            p: scenario parameters before power normalisation
        """
        gamma_a, gamma_b = self.sndrs(draw, self.effective_params(p))
        return np.minimum(gamma_a, gamma_b) < self.threshold(p)

    @abstractmethod
    def sndrs(self, draw: FadingDraw, p: SystemParams) -> Tuple[np.ndarray, np.ndarray]:
        """
        End-to-end SNDRs `(gamma_a, gamma_b)` for the given draws.

        Arguments:
            draw: batch of fading gains
            p: scenario parameters, already power normalised
        """
        raise NotImplementedError

    def __repr__(self):
        return f"{self.__class__.__name__}()"
