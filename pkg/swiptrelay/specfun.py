"""
Special functions used by the closed-form outage expressions. Everything here is
restricted to what the finite sums need: incomplete gamma functions of integer
shape, modified Bessel functions of the second kind of integer order and
Gauss-Chebyshev quadrature of the first kind.
"""
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from swiptrelay.error import DomainError


def _check_shape(m) -> int:
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise DomainError(f"shape must be a positive integer, got {m}")
    return int(m)


def _check_argument(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if np.any(np.isnan(z)) or np.any(z < 0):
        raise DomainError(f"argument must be nonnegative, got {z}")
    return z


def _unwrap(value):
    return float(value) if np.ndim(value) == 0 else value


def lower_incomplete_gamma_int(m: int, z):
    """
    Lower incomplete gamma function γ(m, z) for integer `m`.

    Equal to `(m-1)! (1 - exp(-z) sum_{l<m} z^l / l!)`; evaluated through the
    regularised function of scipy so that small `z` keeps full relative precision.

    Arguments:
        m: positive integer shape
        z: nonnegative argument, scalar or array
    """
    m = _check_shape(m)
    z = _check_argument(z)
    return _unwrap(special.gamma(m) * special.gammainc(m, z))


def upper_incomplete_gamma_int(m: int, z):
    """
    Upper incomplete gamma function Γ(m, z) for integer `m`, the complement of
    [lower_incomplete_gamma_int][swiptrelay.specfun.lower_incomplete_gamma_int].

    Arguments:
        m: positive integer shape
        z: nonnegative argument, scalar or array
    """
    m = _check_shape(m)
    z = _check_argument(z)
    return _unwrap(special.gamma(m) * special.gammaincc(m, z))


def bessel_k_scaled_int(n: int, z):
    """
    Exponentially scaled modified Bessel function `exp(z) K_n(z)` of integer order.

    `K_0` and `K_1` come from the Cephes approximations in scipy, higher orders
    from upward recurrence `K_{n+1} = K_{n-1} + (2n/z) K_n`, which is stable for K.
    Negative orders are folded with `K_{-n} = K_n`.
    """
    if int(n) != n:
        raise DomainError(f"order must be an integer, got {n}")
    n = abs(int(n))
    z = np.asarray(z, dtype=float)
    if np.any(np.isnan(z)) or np.any(z <= 0):
        raise DomainError(f"K_n diverges at nonpositive arguments, got {z}")
    previous, current = special.k0e(z), special.k1e(z)
    if n == 0:
        return _unwrap(previous)
    for order in range(1, n):
        previous, current = current, previous + (2.0 * order / z) * current
    return _unwrap(current)


def bessel_k_int(n: int, z):
    """
    Modified Bessel function of the second kind `K_n(z)` for integer `n` and `z > 0`.

    Usage:

    ```python
    from swiptrelay.specfun import bessel_k_int

    bessel_k_int(2, 1.0)
    ```
    """
    return _unwrap(bessel_k_scaled_int(n, z) * np.exp(-np.asarray(z, dtype=float)))


def log_bessel_k_int(n: int, z):
    """Natural logarithm of `K_n(z)`, safe where `K_n` itself under- or overflows."""
    return _unwrap(np.log(bessel_k_scaled_int(n, z)) - np.asarray(z, dtype=float))


def binomial(n: int, k: int) -> int:
    """
    Exact binomial coefficient. Returns 0 when `k > n`, the usual convention for
    finite sums whose upper limit can fall below the lower one.
    """
    if n < 0 or k < 0:
        raise DomainError(f"binomial needs nonnegative arguments, got ({n}, {k})")
    return int(special.comb(int(n), int(k), exact=True))


@dataclass(frozen=True)
class ChebyshevNodes:
    """
    Nodes `v_n = cos((2n-1) pi / (2N))` of the Gauss-Chebyshev rule of the first kind.

    Arguments:
        order: number of nodes `N`
        nodes: array of length `N`, strictly decreasing, inside (-1, 1)
    """

    order: int
    nodes: np.ndarray

    @property
    def weights(self) -> np.ndarray:
        """Weights of the unweighted rule `pi/N * sqrt(1 - v_n^2)` on [-1, 1]."""
        return np.pi / self.order * np.sqrt(1.0 - self.nodes ** 2)

    def __len__(self):
        return self.order


def chebyshev_nodes(N: int) -> ChebyshevNodes:
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise DomainError(f"quadrature order must be a positive integer, got {N}")
    N = int(N)
    n = np.arange(1, N + 1)
    return ChebyshevNodes(order=N, nodes=np.cos((2 * n - 1) * np.pi / (2 * N)))


def gauss_chebyshev(func: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, N: int) -> float:
    """
    Approximates the integral of `func` over `[lo, hi]` with `N` Gauss-Chebyshev nodes,
    mapped linearly as `x_n = (hi - lo)/2 v_n + (hi + lo)/2`.

    Arguments:
        func: vectorised integrand, receives the array of mapped nodes
        lo: lower limit
        hi: upper limit
        N: quadrature order
    """
    rule = chebyshev_nodes(N)
    half = (hi - lo) / 2.0
    x = half * rule.nodes + (hi + lo) / 2.0
    return float(half * np.sum(rule.weights * np.asarray(func(x), dtype=float)))
