"""
Outage analysis of power splitting SWIPT two-way relays with hardware impairments
"""
__version__ = "0.1.0"

from swiptrelay.system import Protocol, SystemParams
from swiptrelay.channel import GammaChannel, Geometry
from swiptrelay.analytic import system_outage
from swiptrelay.montecarlo import estimate_outage

__all__ = [
    "Protocol",
    "SystemParams",
    "GammaChannel",
    "Geometry",
    "system_outage",
    "estimate_outage",
]
