import numpy as np

from swiptrelay.protocols._scheme import Scheme
from swiptrelay.system import Protocol, sndr_direct


class Direct(Scheme):
    """Two equal slots over the direct link; the relay stays idle."""

    protocol = Protocol.DIRECT

    def sndrs(self, draw, p):
        gamma = np.asarray(sndr_direct(draw.z, p))
        return gamma, gamma
