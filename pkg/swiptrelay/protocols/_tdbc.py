import numpy as np

from swiptrelay.protocols._scheme import Scheme
from swiptrelay.system import Protocol, end_to_end_sndrs


class Tdbc(Scheme):
    """
    Time division broadcast in three slots: S_a sends, S_b sends, the relay
    forwards the scaled sum. Each terminal keeps the better of the direct and the
    relayed copy.

    Usage:

    ```python
    import numpy as np
    from swiptrelay.channel import FadingDraw
    from swiptrelay.protocols import Tdbc
    from swiptrelay.system import SystemParams

    draw = FadingDraw(x=np.array([0.01, 0.0]), y=np.array([0.02, 0.01]), z=np.array([1e-3, 0.0]))
    Tdbc()(draw, SystemParams(R_th=0.5))
    ```
    """

    protocol = Protocol.TDBC

    def sndrs(self, draw, p):
        gamma_a, gamma_b = end_to_end_sndrs(draw, p)
        return np.asarray(gamma_a), np.asarray(gamma_b)
