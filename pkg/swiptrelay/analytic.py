"""
Closed-form outage probability of the TDBC relay network.

The system is in outage when the direct link fails *and* at least one relayed
direction fails, so `P_out = P1 (P2 + P3 - P4)` where `P1` is the direct link
outage, `P2`/`P3` the outage of the relayed signal at S_a/S_b and `P4` their joint
outage. Hardware impairments cap every SNDR, which splits the threshold axis into
three regimes: cooperative, direct only (beyond the relay cooperation ceiling
`I1/(2 I2)`) and full outage (beyond the overall system ceiling `1/(k1^2 + k2^2)`).
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np
from scipy import special

from swiptrelay.channel import GammaChannel
from swiptrelay.error import AnalysisError, DomainError, EvaluationError
from swiptrelay.specfun import (
    binomial,
    gauss_chebyshev,
    log_bessel_k_int,
    lower_incomplete_gamma_int,
)
from swiptrelay.system import DerivedConstants, Link, SystemParams, derive_constants

logger = logging.getLogger(__name__)

LINK_TOLERANCE = 1e-9
JOINT_TOLERANCE = 2e-3
ROOT_IMAG_TOLERANCE = 1e-9
ROOT_MIN = 1e-12
ROOT_MERGE = 1e-7
ROOT_MATCH = 1e-6


class Regime(Enum):
    COOPERATIVE = "Cooperative"
    DIRECT_ONLY = "DirectOnly"
    FULL_OUTAGE = "FullOutage"


class RootCase(Enum):
    ONE_ROOT = "OneRoot"
    THREE_ROOTS = "ThreeRoots"


class P4Case(Enum):
    NOT_APPLICABLE = "NotApplicable"
    NO_INTERSECTION = "NoIntersection"
    ONE_ROOT = "OneRoot"
    THREE_ROOTS_GATE_HIGH = "ThreeRootsGateHigh"
    THREE_ROOTS_GATE_LOW = "ThreeRootsGateLow"


@dataclass(frozen=True)
class OutageCurve:
    """
    Boundary `Q(x) = A x + B + C / x` of the relayed outage event: the relayed
    signal at S_a fails iff `Y < Q(X)`, the one at S_b iff `X < Q(Y)`.
    """

    A: float
    B: float
    C: float

    @classmethod
    def from_constants(cls, p: SystemParams, c: DerivedConstants) -> "OutageCurve":
        if c.I4 is None:
            raise DomainError("the outage curve only exists below the relay cutoff")
        g = c.gamma_th
        return cls(A=p.rho * g * c.I2 * c.I4, B=g * c.I3 * c.I4, C=g * c.I4)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.A * x + self.B + self.C / x

    def lower_inverse(self, x):
        """
        Lower branch `G(x)` of the inverse of `Q`: the smaller `y` with `Q(y) = x`.
        NaN where `x` lies below the minimum of `Q`.
        """
        x = np.asarray(x, dtype=float)
        shifted = x - self.B
        with np.errstate(invalid="ignore", divide="ignore"):
            disc = np.sqrt(shifted ** 2 - 4.0 * self.A * self.C)
            return np.where(shifted > 0, 2.0 * self.C / (shifted + disc), np.nan)


@dataclass(frozen=True)
class QuarticAnalysis:
    """
    Intersections of the two outage boundaries `y = Q(x)` and `x = Q(y)`.

    Arguments:
        coefficients: `(c0, c1, c2, c3, c4)` of the quartic in `x`
        positive_real_roots: sorted positive real roots after merging coincident ones
        x_in: intersection on the diagonal, `Q(x_in) = x_in`
        case: one or three positive intersections
        x1: first off-diagonal intersection, if any
        x2: second off-diagonal intersection, if any
        phi1: `max(x1, x2)`
        phi2: `max(Q(x1), Q(x2))`
        gate_g: `G` at the midpoint of `[x_in, phi1]`
        gate_q: `Q` at the same midpoint
    """

    coefficients: Tuple[float, ...]
    positive_real_roots: Tuple[float, ...]
    x_in: float
    case: RootCase
    x1: Optional[float] = None
    x2: Optional[float] = None
    phi1: Optional[float] = None
    phi2: Optional[float] = None
    gate_g: Optional[float] = None
    gate_q: Optional[float] = None

    @property
    def gate(self) -> bool:
        """Unit step `U(gate_g - gate_q)`; False when there is nothing to gate."""
        if self.gate_g is None or not np.isfinite(self.gate_g):
            return False
        return self.gate_g > self.gate_q


@dataclass(frozen=True)
class OutageResult:
    """
    System outage probability together with the terms it was assembled from.
    `raw` keeps the unclamped values for diagnostics.
    """

    p1: float
    p2: float
    p3: float
    p4: float
    p_out: float
    regime: Regime
    p4_case: P4Case
    quadrature_N: int
    gamma_th: float
    raw: Dict[str, float] = field(default_factory=dict, compare=False)


def _clamp(component: str, raw: float, tolerance: float) -> float:
    if not np.isfinite(raw):
        raise EvaluationError(component, "evaluation did not produce a finite value", raw)
    if raw < -tolerance or raw > 1.0 + tolerance:
        raise EvaluationError(component, f"raw probability {raw!r} outside [0, 1]", raw)
    clamped = min(max(raw, 0.0), 1.0)
    if clamped != raw:
        logger.debug("clamped %s from %r", component, raw)
    return clamped


def _p1_raw(p: SystemParams, c: DerivedConstants) -> float:
    g = c.gamma_th
    if g >= c.osc_threshold:
        return 1.0
    m = p.ch_d.m
    scaled = g / (p.ch_d.scale * p.rho * (1.0 - g * p.impairment))
    return lower_incomplete_gamma_int(m, scaled) / special.gamma(m)


def p1(p: SystemParams) -> float:
    """
    Outage probability of the direct link, `Pr(gamma_ab < gamma_th)`. Certain outage
    once the threshold reaches `1/(k1^2 + k2^2)`, otherwise the gamma CDF of `Z` at
    `gamma_th / (rho (1 - gamma_th (k1^2 + k2^2)))`.
    """
    return _clamp("p1", _p1_raw(p, derive_constants(p)), LINK_TOLERANCE)


def _relay_link_raw(
    p: SystemParams, c: DerivedConstants, own: GammaChannel, partner: GammaChannel
) -> float:
    """
    `Pr(V < Q(U))` with `U ~ own` and `V ~ partner`. Expanding the partner CDF as a
    finite sum and `Q(u)^l` binomially leaves integrals of the form
    `int u^(nu-1) exp(-b u - g/u) du = 2 (g/b)^(nu/2) K_nu(2 sqrt(b g))`.
    """
    if c.I4 is None:
        return 1.0
    curve = OutageCurve.from_constants(p, c)
    m_own, theta_own = own.m, own.scale
    m_partner, theta_partner = partner.m, partner.scale
    b = curve.A / theta_partner + 1.0 / theta_own
    g = curve.C / theta_partner
    z = 2.0 * np.sqrt(b * g)
    i2_rho = c.I2 * p.rho
    log_terms = []
    for l in range(m_partner):
        for s in range(l + 1):
            if s > 0 and i2_rho == 0:
                continue
            for t in range(l - s + 1):
                nu = s + m_own - t
                log_terms.append(
                    np.log(binomial(l, s) * binomial(l - s, t))
                    - special.gammaln(l + 1)
                    + (s * np.log(i2_rho) if s else 0.0)
                    + (l - s - t) * np.log(c.I3)
                    + l * np.log(g)
                    + 0.5 * nu * (np.log(g) - np.log(b))
                    + log_bessel_k_int(nu, z)
                )
    log_prefactor = (
        np.log(2.0)
        - special.gammaln(m_own)
        - m_own * np.log(theta_own)
        - curve.B / theta_partner
    )
    return 1.0 - float(np.exp(log_prefactor + special.logsumexp(log_terms)))


def p2(p: SystemParams) -> float:
    """Outage of the relayed signal received at S_a, `Pr(gamma_ra < gamma_th)`."""
    c = derive_constants(p)
    return _clamp("p2", _relay_link_raw(p, c, p.ch_a, p.ch_b), LINK_TOLERANCE)


def p3(p: SystemParams) -> float:
    """Outage of the relayed signal received at S_b; `p2` with the links exchanged."""
    c = derive_constants(p)
    return _clamp("p3", _relay_link_raw(p, c, p.ch_b, p.ch_a), LINK_TOLERANCE)


def _x_in_closed_form(p: SystemParams, c: DerivedConstants) -> float:
    g = c.gamma_th
    denominator = 2.0 * p.rho * (2.0 * c.I2 * g - c.I1)
    disc = (c.I3 * g) ** 2 - 4.0 * p.rho * g * (2.0 * c.I2 * g - c.I1)
    return float((-c.I3 * g - np.sqrt(disc)) / denominator)


def _quartic_coefficients(curve: OutageCurve, i4: float) -> np.ndarray:
    A, B, C = curve.A, curve.B, curve.C
    return (
        np.array(
            [
                A * C ** 2,
                B * C * (2.0 * A + 1.0),
                A * B ** 2 + 2.0 * A ** 2 * C + B ** 2,
                B * (2.0 * A ** 2 + A - 1.0),
                A * (A ** 2 - 1.0),
            ]
        )
        / i4
    )


def _polish(coefficients_desc: np.ndarray, root: complex, steps: int = 3) -> complex:
    derivative = np.polyder(coefficients_desc)
    for _ in range(steps):
        slope = np.polyval(derivative, root)
        if slope == 0:
            break
        root = root - np.polyval(coefficients_desc, root) / slope
    return root


def quartic_analysis(p: SystemParams) -> QuarticAnalysis:
    """
    Finds where `y = Q(x)` meets its mirror image `x = Q(y)`. Substituting one into
    the other gives a quartic whose roots are solved as eigenvalues of the companion
    matrix (`np.roots`) after rescaling `x` by the diagonal intersection, then
    polished by Newton steps and checked against the closed form of `x_in`.
    """
    c = derive_constants(p)
    if c.I4 is None or c.gamma_th >= c.rcc_threshold:
        raise DomainError(
            "the boundaries only intersect below the relay cooperation ceiling"
        )
    curve = OutageCurve.from_constants(p, c)
    coefficients = _quartic_coefficients(curve, c.I4)
    x_in = _x_in_closed_form(p, c)

    scaled = coefficients * x_in ** np.arange(5)
    scaled = scaled / np.max(np.abs(scaled))
    desc = scaled[::-1]
    candidates = []
    for u in np.roots(desc):
        u = _polish(desc, complex(u))
        if abs(u.imag) <= ROOT_IMAG_TOLERANCE * (1.0 + abs(u.real)) and u.real > ROOT_MIN:
            candidates.append(float(u.real) * x_in)

    bound = 1e-9 * np.max(np.abs(coefficients))
    for r in candidates:
        residual = abs(np.polyval(coefficients[::-1], r))
        if residual > bound * max(1.0, r ** 4):
            raise AnalysisError(f"quartic root {r!r} has residual {residual!r}")

    roots = []
    for r in sorted(candidates):
        if roots and abs(r - roots[-1]) <= ROOT_MERGE * max(abs(r), abs(roots[-1])):
            continue
        roots.append(r)
    matches = [r for r in roots if abs(r - x_in) <= ROOT_MATCH * x_in]
    if not matches:
        raise AnalysisError(
            f"diagonal intersection {x_in!r} not among the roots {roots!r}"
        )
    others = [r for r in roots if r != matches[0]]
    logger.debug("quartic roots %s, x_in=%r", roots, x_in)

    base = dict(
        coefficients=tuple(float(v) for v in coefficients),
        positive_real_roots=tuple(roots),
        x_in=x_in,
    )
    if not others:
        return QuarticAnalysis(case=RootCase.ONE_ROOT, **base)
    if len(others) != 2:
        raise AnalysisError(f"expected zero or two off-diagonal roots, found {others!r}")
    x1, x2 = others
    phi1 = max(x1, x2)
    midpoint = (x_in + phi1) / 2.0
    return QuarticAnalysis(
        case=RootCase.THREE_ROOTS,
        x1=x1,
        x2=x2,
        phi1=phi1,
        phi2=float(max(curve(x1), curve(x2))),
        gate_g=float(curve.lower_inverse(midpoint)),
        gate_q=float(curve(midpoint)),
        **base,
    )


def _partner_mass(partner: GammaChannel, lo, hi):
    """`Pr(lo < V < hi)` taken from whichever tail of `V` keeps the difference exact."""
    lower = partner.cdf(lo)
    return np.where(
        lower < 0.5, partner.cdf(hi) - lower, partner.sf(lo) - partner.sf(hi)
    )


def _joint_half(own, partner, curve: OutageCurve, x_in: float, N: int) -> float:
    """
    `Pr(U < x_in, U < V < Q(U))`, the joint outage on the side `V > U` of the
    diagonal. Beyond `x_in` the curve lies below the diagonal, so nothing there fails
    twice. The quadrature runs over `u = x_in t^2` to resolve the peak of the
    integrand near the origin at high SNR.
    """

    def integrand(t):
        u = x_in * t ** 2
        return 2.0 * x_in * t * own.pdf(u) * _partner_mass(partner, u, curve(u))

    return gauss_chebyshev(integrand, 0.0, 1.0, N)


def _sliver(own, partner, curve: OutageCurve, lo: float, hi: float, N: int) -> float:
    """Mass of `Q(U) < V < G(U)` for `U` in `[lo, hi]`."""

    def integrand(u):
        return own.pdf(u) * (partner.sf(curve(u)) - partner.sf(curve.lower_inverse(u)))

    return gauss_chebyshev(integrand, lo, hi, N)


def joint_outage_from_roots(p: SystemParams, analysis: QuarticAnalysis) -> Tuple[float, P4Case]:
    """
    Raw joint outage for a given intersection analysis. The joint outage region
    splits along the diagonal into two mirrored halves, each integrated directly
    on `[0, x_in]` so that small probabilities keep their relative precision. With
    three intersections and an open gate, the lower boundary on `[x_in, phi]` is `G`
    rather than `Q` and the sliver between them is taken out as well.
    """
    c = derive_constants(p)
    curve = OutageCurve.from_constants(p, c)
    N, x_in = int(p.quadrature_N), analysis.x_in
    raw = 0.0
    for own, partner in ((p.ch_a, p.ch_b), (p.ch_b, p.ch_a)):
        raw += _joint_half(own, partner, curve, x_in, N)
    if analysis.case is RootCase.ONE_ROOT:
        return raw, P4Case.ONE_ROOT
    if not analysis.gate:
        return raw, P4Case.THREE_ROOTS_GATE_LOW
    raw -= _sliver(p.ch_a, p.ch_b, curve, x_in, analysis.phi1, N)
    raw -= _sliver(p.ch_b, p.ch_a, curve, x_in, analysis.phi2, N)
    return raw, P4Case.THREE_ROOTS_GATE_HIGH


def _p4_raw(p: SystemParams, c: DerivedConstants) -> Tuple[float, P4Case]:
    if c.I4 is None:
        return 1.0, P4Case.NOT_APPLICABLE
    if c.gamma_th >= c.rcc_threshold:
        # both relayed directions can never succeed together
        raw = (
            _relay_link_raw(p, c, p.ch_a, p.ch_b)
            + _relay_link_raw(p, c, p.ch_b, p.ch_a)
            - 1.0
        )
        return raw, P4Case.NO_INTERSECTION
    return joint_outage_from_roots(p, quartic_analysis(p))


def p4(p: SystemParams) -> Tuple[float, P4Case]:
    """
    Joint outage of both relayed directions,
    `Pr(gamma_ra < gamma_th, gamma_rb < gamma_th)`, with the label of the branch
    that produced it. Between the two ceilings the relayed directions cannot both
    succeed and `P4 = P2 + P3 - 1`.
    """
    if int(p.quadrature_N) < 1:
        raise DomainError("quadrature order must be at least 1")
    raw, case = _p4_raw(p, derive_constants(p))
    return _clamp("p4", raw, JOINT_TOLERANCE), case


def classify_regime(p: SystemParams) -> Regime:
    c = derive_constants(p)
    if c.gamma_th >= c.osc_threshold:
        return Regime.FULL_OUTAGE
    if c.gamma_th >= c.rcc_threshold:
        return Regime.DIRECT_ONLY
    return Regime.COOPERATIVE


def system_outage(p: SystemParams) -> OutageResult:
    """
    Assembles the system outage probability from its terms.

    Usage:

    ```python
    from swiptrelay.analytic import system_outage
    from swiptrelay.system import SystemParams

    result = system_outage(SystemParams(rho=1e4, R_th=1.0))
    result.p_out, result.regime, result.p4_case
    ```
    """
    c = derive_constants(p)
    regime = classify_regime(p)
    raw = {
        "p1": _p1_raw(p, c),
        "p2": _relay_link_raw(p, c, p.ch_a, p.ch_b),
        "p3": _relay_link_raw(p, c, p.ch_b, p.ch_a),
    }
    raw["p4"], case = _p4_raw(p, c)
    values = {
        name: _clamp(name, value, JOINT_TOLERANCE if name == "p4" else LINK_TOLERANCE)
        for name, value in raw.items()
    }
    if regime is Regime.FULL_OUTAGE:
        p_out = 1.0
    elif regime is Regime.DIRECT_ONLY:
        p_out = values["p1"]
    else:
        relayed = values["p2"] + values["p3"] - values["p4"]
        raw["relayed"] = relayed
        p_out = values["p1"] * _clamp("p_out", relayed, JOINT_TOLERANCE)
    logger.debug(
        "gamma_th=%r regime=%s p4_case=%s p_out=%r",
        c.gamma_th,
        regime.value,
        case.value,
        p_out,
    )
    return OutageResult(
        p_out=p_out,
        regime=regime,
        p4_case=case,
        quadrature_N=int(p.quadrature_N),
        gamma_th=c.gamma_th,
        raw=raw,
        **values,
    )


def t2t_outage(p: SystemParams, link: Link) -> float:
    """Analytic probability of a single outage event, the counterpart of `estimate_t2t`."""
    if link is Link.DIRECT_LINK:
        return p1(p)
    if link is Link.RELAY_TO_A:
        return p2(p)
    if link is Link.RELAY_TO_B:
        return p3(p)
    return p4(p)[0]


def diversity_gain(p: SystemParams) -> int:
    """
    Asymptotic diversity order: the direct link shape `m_d` as long as the threshold
    stays below the overall system ceiling, zero beyond it.
    """
    c = derive_constants(p)
    return 0 if c.gamma_th >= c.osc_threshold else p.ch_d.m


def hi_ceiling_levels(p: SystemParams) -> Tuple[float, float]:
    """
    Impairment levels `k1 = k2 = k` at which the current threshold hits the relay
    cooperation ceiling (`k_rcc`) and the overall system ceiling (`k_osc`).
    """
    g = derive_constants(p).gamma_th
    if g <= 0:
        return np.inf, np.inf
    inverse = 1.0 / (2.0 * g)
    # 2k^2 solves s^2 + 2s = 1/(2 gamma_th)
    s = inverse / (1.0 + np.sqrt(1.0 + inverse))
    return float(np.sqrt(s / 2.0)), float(np.sqrt(inverse))
