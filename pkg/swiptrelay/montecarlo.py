"""
Monte Carlo oracle for the outage probabilities. Draws are generated in chunks of
`CHUNK` samples; the gain of link `l` in chunk `c` of a run comes from the Philox
substream spawned from `SeedSequence(seed, spawn_key=(c, l))`. A run gives the same
counts whether its chunks are evaluated serially or by a pool of workers, and the draws
of one link never depend on the fading parameters of another.
"""
import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from swiptrelay.channel import FadingDraw
from swiptrelay.error import DeepTailWarning, DomainError
from swiptrelay.protocols import Scheme, scheme_for
from swiptrelay.system import (
    Link,
    Protocol,
    SystemParams,
    Terminal,
    sndr_direct,
    sndr_relay_tdbc,
    threshold_sndr,
)

logger = logging.getLogger(__name__)

CHUNK = 2 ** 16
DEEP_TAIL = 1e-7
STREAMS = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class McEstimate:
    """
    Empirical outage probability.

    Arguments:
        p_hat: fraction of draws in outage
        stderr: binomial standard error `sqrt(p_hat (1 - p_hat) / n_samples)`
        n_samples: number of draws
        seed: root seed of the run
        protocol: transmission scheme that was simulated
        outages: number of draws in outage
        tail_limited: set when the target probability is too small for the sample size
    """

    p_hat: float
    stderr: float
    n_samples: int
    seed: int
    protocol: Protocol
    outages: int
    tail_limited: bool = False


def chunk_generator(seed: int, chunk: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator owning one link's draws in chunk `chunk` of a run."""
    key = (int(chunk), int(stream))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=key)))


def draw_gains(p: SystemParams, seed: int, chunk: int, size: int) -> FadingDraw:
    return FadingDraw(
        x=p.ch_a.sample(chunk_generator(seed, chunk, STREAMS["x"]), size=size),
        y=p.ch_b.sample(chunk_generator(seed, chunk, STREAMS["y"]), size=size),
        z=p.ch_d.sample(chunk_generator(seed, chunk, STREAMS["z"]), size=size),
    )


def count_events(
    p: SystemParams,
    event: Callable[[FadingDraw], np.ndarray],
    n: int,
    seed: int,
    workers: int = 1,
) -> int:
    """
    Counts the draws for which `event` holds, over `n` draws split into chunks.

    Arguments:
        p: scenario whose channels are sampled
        event: maps a batch of draws to a boolean array
        n: total number of draws
        seed: root seed
        workers: number of threads evaluating chunks
    """
    if int(n) != n or n < 1:
        raise DomainError(f"number of draws must be a positive integer, got {n}")
    n = int(n)
    sizes = [CHUNK] * (n // CHUNK) + ([n % CHUNK] if n % CHUNK else [])

    def run(chunk: int) -> int:
        draw = draw_gains(p, seed, chunk, sizes[chunk])
        return int(np.count_nonzero(event(draw)))

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(run, range(len(sizes))))
    else:
        counts = [run(chunk) for chunk in range(len(sizes))]
    return sum(counts)


def _estimate(
    outages: int, n: int, seed: int, protocol: Protocol, expected: Optional[float]
) -> McEstimate:
    p_hat = outages / n
    target = p_hat if expected is None else expected
    tail_limited = target < DEEP_TAIL
    if tail_limited:
        warnings.warn(
            f"target probability {target:.3g} is below {DEEP_TAIL:g}; "
            f"{n} draws leave the estimate dominated by its standard error",
            DeepTailWarning,
        )
    return McEstimate(
        p_hat=p_hat,
        stderr=float(np.sqrt(p_hat * (1.0 - p_hat) / n)),
        n_samples=n,
        seed=int(seed),
        protocol=protocol,
        outages=outages,
        tail_limited=tail_limited,
    )


def estimate_outage(
    p: SystemParams,
    scheme: Union[Scheme, Protocol, str],
    n: int = 1_000_000,
    seed: int = 0,
    workers: int = 1,
    expected: Optional[float] = None,
) -> McEstimate:
    """
    Simulated system outage probability of a transmission scheme.

    Usage:

    ```python
    from swiptrelay.montecarlo import estimate_outage
    from swiptrelay.system import SystemParams

    estimate_outage(SystemParams(rho=1e4), "mabc", n=10_000, seed=1).p_hat
    ```
    """
    if not isinstance(scheme, Scheme):
        scheme = scheme_for(scheme)
    outages = count_events(p, lambda draw: scheme(draw, p), n, seed, workers)
    logger.info(
        "%s: %d outages in %d draws (seed=%d)", scheme.protocol.value, outages, n, seed
    )
    return _estimate(outages, int(n), seed, scheme.protocol, expected)


def estimate_outage_tdbc(p: SystemParams, n: int = 1_000_000, seed: int = 0, **kwargs) -> McEstimate:
    return estimate_outage(p, Protocol.TDBC, n, seed, **kwargs)


def estimate_outage_mabc(p: SystemParams, n: int = 1_000_000, seed: int = 0, **kwargs) -> McEstimate:
    return estimate_outage(p, Protocol.MABC, n, seed, **kwargs)


def estimate_outage_direct(p: SystemParams, n: int = 1_000_000, seed: int = 0, **kwargs) -> McEstimate:
    return estimate_outage(p, Protocol.DIRECT, n, seed, **kwargs)


def estimate_t2t(
    p: SystemParams,
    link: Link,
    n: int = 1_000_000,
    seed: int = 0,
    workers: int = 1,
    expected: Optional[float] = None,
) -> McEstimate:
    """
    Simulated probability of a single TDBC outage event: the direct link, the relayed
    signal at either terminal, or both relayed signals together.
    """
    gamma_th = threshold_sndr(p.R_th, p.T, Protocol.TDBC.phases)

    def event(draw: FadingDraw) -> np.ndarray:
        if link is Link.DIRECT_LINK:
            return np.asarray(sndr_direct(draw.z, p)) < gamma_th
        fails_a = np.asarray(sndr_relay_tdbc(draw, Terminal.A, p)) < gamma_th
        if link is Link.RELAY_TO_A:
            return fails_a
        fails_b = np.asarray(sndr_relay_tdbc(draw, Terminal.B, p)) < gamma_th
        if link is Link.RELAY_TO_B:
            return fails_b
        return fails_a & fails_b

    outages = count_events(p, event, n, seed, workers)
    logger.info("%s: %d events in %d draws (seed=%d)", link.value, outages, n, seed)
    return _estimate(outages, int(n), seed, Protocol.TDBC, expected)


def relative_error(analytic: float, mc: Union[McEstimate, float]) -> float:
    """Relative deviation `|analytic - simulated| / simulated`."""
    p_hat = mc.p_hat if isinstance(mc, McEstimate) else float(mc)
    if p_hat <= 0:
        raise DomainError("relative error is undefined for a zero simulated probability")
    return abs(analytic - p_hat) / p_hat
