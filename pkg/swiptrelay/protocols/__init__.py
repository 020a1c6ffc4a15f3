from swiptrelay.error import DomainError
from swiptrelay.protocols._scheme import Scheme
from swiptrelay.protocols._tdbc import Tdbc
from swiptrelay.protocols._mabc import Mabc
from swiptrelay.protocols._direct import Direct
from swiptrelay.system import Protocol

_SCHEMES = {Protocol.TDBC: Tdbc, Protocol.MABC: Mabc, Protocol.DIRECT: Direct}


def scheme_for(protocol) -> Scheme:
    """Returns the scheme implementing `protocol`, given as enum member or name."""
    if not isinstance(protocol, Protocol):
        try:
            protocol = Protocol(str(protocol).lower())
        except ValueError:
            names = ", ".join(p.value for p in Protocol)
            raise DomainError(f"unknown protocol {protocol!r}, pick one of {names}")
    return _SCHEMES[protocol]()


__all__ = ["Scheme", "Tdbc", "Mabc", "Direct", "scheme_for"]
