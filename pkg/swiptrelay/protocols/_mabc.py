import numpy as np

from swiptrelay.protocols._scheme import Scheme
from swiptrelay.system import Protocol, Terminal, sndr_relay_mabc


class Mabc(Scheme):
    """
    Multiple access broadcast in two slots. Both terminals transmit to the relay at
    once, so there is no usable direct link and only the relayed SNDR counts.
    """

    protocol = Protocol.MABC

    def sndrs(self, draw, p):
        return (
            np.asarray(sndr_relay_mabc(draw, Terminal.A, p)),
            np.asarray(sndr_relay_mabc(draw, Terminal.B, p)),
        )
