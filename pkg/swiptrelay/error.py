from typing import Optional


class SwiptRelayError(Exception):
    """
    Base class for every error raised by `swiptrelay`. Catch this one if you
    only want to know that *something* in the outage machinery went wrong.
    """


class DomainError(SwiptRelayError, ValueError):
    """
    Raised when an argument lies outside the domain of an operation, like a
    negative gain, a power splitting ratio of 1 or a quadrature order of 0.
    """


class EvaluationError(SwiptRelayError, ArithmeticError):
    """
    Raised when a closed-form probability cannot be trusted. This happens when the
    evaluation produced a NaN or when the raw value left the window that quadrature
    error can explain.

    Arguments:
        component: name of the term that failed, e.g. `"p2"` or `"p4"`
        raw: the raw value that was computed, if any
    """

    def __init__(self, component: str, message: str, raw: Optional[float] = None):
        self.component = component
        self.raw = raw
        super().__init__(f"{component}: {message}")


class AnalysisError(SwiptRelayError, RuntimeError):
    """
    Raised when the intersection analysis of the joint outage region fails, for
    example when the fixed point `x_in` is not among the quartic roots.
    """


class ConfigError(SwiptRelayError, ValueError):
    """
    Raised for malformed scenario files. The message carries the source and the
    line number so that the command line can point the user to the culprit.
    """

    def __init__(self, message: str, line: Optional[int] = None, source: str = "<config>"):
        self.line = line
        self.source = source
        self.message = message
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


class DeepTailWarning(UserWarning):
    """
    Emitted when a Monte Carlo run targets a probability so small that the
    estimate will be dominated by its standard error.
    """
