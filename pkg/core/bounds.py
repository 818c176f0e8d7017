"""Certified bounds for ln C(eps, I_K) and the asymptotic constants.

Upper bounds come from truncating the kernel at the least level m whose tail
norm is <= eps/2 and covering the finite-rank part:

    ln C(eps) <= dim V_m * ln(1 + 4 kappa_m / eps)

Lower bounds come from the volume of the image of the first levels:

    J_m = 1/2 sum_{k<=m} tau_k ln(a_k / tau_k) - dim V_m ln(eps) <= ln C(eps)

Both hold for every eps > 0. The asymptotic regimes report the constants of
the limit theorems, each against its own comparison function of eps.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Tuple

from config import CERTIFY_K_MAX, GEOMETRIC_M_MAX, POWER_M_MAX
from .errors import DomainError, HypothesisNotCertified, ZeroCoefficient
from .kernels import (
    ExplicitModel,
    GaussianSphereModel,
    GaussianTypeModel,
    GeometricModel,
    KernelSpec,
    PowerLawModel,
    coefficient,
    decay_ratio_range,
    embedding_norm,
    geometric_envelope,
    log_coefficient,
    partial_norm,
    truncation_level,
)
from .manifold import ManifoldSpec, cumulative_dim, dim_growth_constant, eigenspace_dim
from .specfun import ln_gamma

logger = logging.getLogger(__name__)


class Regime(str, Enum):
    """Asymptotic regimes, one per limit theorem."""

    GEOMETRIC_UPPER = "geometric_upper"
    GEOMETRIC_LOWER = "geometric_lower"
    POWER_UPPER = "power_upper"
    POWER_LOWER = "power_lower"


@dataclass(frozen=True)
class BoundPoint:
    """Certified bounds at one eps, with the witnessing levels."""

    eps: float
    ln_upper: float
    m_upper: int
    ln_lower: float
    m_lower: int

    def as_dict(self) -> Dict[str, Any]:
        return {
            "eps": self.eps,
            "ln_upper": self.ln_upper,
            "m_upper": self.m_upper,
            "ln_lower": self.ln_lower,
            "m_lower": self.m_lower,
        }


@dataclass
class BoundCurve:
    """Bounds for one kernel over an eps grid, in grid order."""

    COLUMNS = ["eps", "ln_upper", "m_upper", "ln_lower", "m_lower"]

    kernel: KernelSpec
    points: List[BoundPoint] = field(default_factory=list)

    def rows(self) -> List[Dict[str, Any]]:
        """One dict per point, keyed by COLUMNS."""
        return [point.as_dict() for point in self.points]

    def as_dict(self) -> Dict[str, Any]:
        return {"kernel": self.kernel.as_dict(), "points": self.rows()}


@dataclass(frozen=True)
class AsymptoticReport:
    """A limit-theorem constant and the comparison function it refers to.

    The comparison function is (1/eps)^eps_exponent * [ln(1/eps)]^log_exponent.

    Attributes:
    - regime: which theorem the constant comes from.
    - constant: the theorem's constant (positive).
    - eps_exponent, log_exponent: exponents of the comparison function.
    - params: the hypothesis parameters the constant was evaluated at.
    - offset: additive term of the lower power regime (ln sqrt(a_0)), else 0.
    - requires_rescaling: the geometric lower regime needs
      a_0 Gamma(alpha+1) Gamma(alpha+beta+2) / (3 Gamma(beta+1)) >= 1.
    - certified_by: "closed_form" when the model implies the hypothesis,
      "empirical" when it was checked on finitely many levels only.
    """

    regime: Regime
    constant: float
    eps_exponent: float
    log_exponent: float
    params: Dict[str, float] = field(default_factory=dict)
    offset: float = 0.0
    requires_rescaling: bool = False
    certified_by: str = "closed_form"

    @property
    def rate_description(self) -> str:
        parts = []
        if self.eps_exponent:
            parts.append(f"(1/eps)^{self.eps_exponent:.6g}")
        if self.log_exponent:
            parts.append(f"ln(1/eps)^{self.log_exponent:.6g}")
        return " * ".join(parts) or "1"

    def comparison(self, eps: float) -> float:
        """Value of the comparison function at eps < 1."""
        if not 0 < eps < 1:
            raise DomainError("the comparison function needs 0 < eps < 1")
        log_inverse = math.log(1.0 / eps)
        return math.exp(self.eps_exponent * log_inverse) * log_inverse ** self.log_exponent

    def as_dict(self) -> Dict[str, Any]:
        return {
            "regime": self.regime.value,
            "constant": self.constant,
            "eps_exponent": self.eps_exponent,
            "log_exponent": self.log_exponent,
            "rate": self.rate_description,
            "params": dict(self.params),
            "offset": self.offset,
            "requires_rescaling": self.requires_rescaling,
            "certified_by": self.certified_by,
        }


# === Finite-eps bounds ===


def finite_rank_covering_ln(rank: int, norm: float, eps: float) -> float:
    """rank * ln(1 + 2 norm / eps), the log covering number of a rank-n operator."""
    if not eps > 0:
        raise DomainError("eps must be positive")
    return float(rank) * math.log1p(2.0 * norm / eps)


def upper_bound_lnC(spec: KernelSpec, eps: float, simplified: bool = False) -> Tuple[float, int]:
    """Certified upper bound on ln C(eps, I_K) and the truncation level used.

    Returns (0, 0) when eps >= kappa. Otherwise m is the least level with
    kappa_m^s <= eps/2 and the bound is dim V_m ln(1 + 4 kappa_m / eps), or
    the coarser dim V_m ln(8 kappa / eps) when simplified is set.

    Raises:
    - LevelOverflow: if no level up to LEVEL_LIMIT reaches the tail target.
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    kappa = embedding_norm(spec)
    if eps >= kappa:
        return 0.0, 0
    m = truncation_level(spec, (eps / 2.0) ** 2)
    dim = cumulative_dim(spec.manifold, m, limit=None)
    if simplified:
        value = float(dim) * math.log(8.0 * kappa / eps)
    else:
        value = finite_rank_covering_ln(dim, 2.0 * partial_norm(spec, m), eps)
    logger.debug("upper bound at eps=%.3g: m=%d dim=%d value=%.6g", eps, m, dim, value)
    return value, m


def default_m_max(spec: KernelSpec) -> int:
    """Scan ceiling for lower_bound_lnC."""
    if isinstance(spec.model, PowerLawModel):
        return POWER_M_MAX
    if isinstance(spec.model, ExplicitModel):
        return max(1, spec.model.support_end)
    return GEOMETRIC_M_MAX


def lower_bound_lnC(
        spec: KernelSpec, eps: float, m_max: Optional[int] = None
) -> Tuple[float, int]:
    """Certified lower bound max(0, max_{1<=m<=m_max} J_m) and its maximizer.

    Levels with a_k = 0 or tau_k = 0 are left out of J_m. For every model but
    explicit lists a_k/tau_k is non-increasing in k >= 1, so the scan stops at
    the first non-positive increment. Returns (0, 0) when no J_m is positive.

    Raises:
    - ZeroCoefficient: if no scanned level has a positive coefficient.
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    if m_max is None:
        m_max = default_m_max(spec)
    if m_max < 1:
        raise DomainError("m_max must be positive")
    if isinstance(spec.model, ExplicitModel):
        m_max = min(m_max, max(1, spec.model.support_end))
    monotone = not isinstance(spec.model, ExplicitModel)

    two_ln_eps = 2.0 * math.log(eps)
    running = 0.0
    best, best_m = 0.0, 0
    seen_positive = False
    for k in range(m_max + 1):
        tau = eigenspace_dim(spec.manifold, k, limit=None)
        ln_a = log_coefficient(spec, k)
        stop = False
        if tau > 0 and ln_a > -math.inf:
            increment = 0.5 * tau * (ln_a - math.log(tau) - two_ln_eps)
            # later increments are no larger, so J_k is the last candidate
            stop = k >= 1 and monotone and seen_positive and increment <= 0
            seen_positive = True
            running += increment
        if k >= 1 and seen_positive and running > best:
            best, best_m = running, k
        if stop:
            logger.debug("lower scan at eps=%.3g stopped at level %d", eps, k)
            break
    if not seen_positive:
        raise ZeroCoefficient(f"no positive coefficient up to level {m_max}")
    return best, best_m


def bound_curve(
        spec: KernelSpec, eps_grid: Iterable[float], m_max: Optional[int] = None
) -> BoundCurve:
    """Evaluate both bounds on every eps of the grid, preserving grid order."""
    curve = BoundCurve(kernel=spec)
    for eps in eps_grid:
        ln_upper, m_upper = upper_bound_lnC(spec, eps)
        ln_lower, m_lower = lower_bound_lnC(spec, eps, m_max)
        curve.points.append(BoundPoint(eps, ln_upper, m_upper, ln_lower, m_lower))
    logger.info("bound curve: %d points for %s", len(curve.points), spec.manifold.label)
    return curve


# === Critical points ===


def _first_positive_coefficient(spec: KernelSpec) -> float:
    for k in range(CERTIFY_K_MAX + 1):
        value = coefficient(spec, k)
        if value > 0:
            return value
    raise ZeroCoefficient(f"no positive coefficient up to level {CERTIFY_K_MAX}")


def critical_m_geometric(spec: KernelSpec, delta: float, eps: float) -> float:
    """Critical point of the geometric lower-bound envelope.

    c = -d / ((d+1)(ln(1/delta) + d - 1)) * ln(3 Gamma(beta+1) eps^2 / (a0 Gamma(alpha+beta+2) Gamma(alpha+1)))

    Raises:
    - DomainError: if delta is not in (0, 1) or c <= 0.
    """
    if not 0 < delta < 1:
        raise DomainError("delta must lie in (0, 1)")
    if not eps > 0:
        raise DomainError("eps must be positive")
    manifold = spec.manifold
    d, alpha, beta = manifold.d, manifold.alpha, manifold.beta
    a0 = _first_positive_coefficient(spec)
    log_argument = (
        math.log(3.0)
        + ln_gamma(beta + 1)
        + 2.0 * math.log(eps)
        - math.log(a0)
        - ln_gamma(alpha + beta + 2)
        - ln_gamma(alpha + 1)
    )
    c = -d / ((d + 1) * (math.log(1.0 / delta) + d - 1)) * log_argument
    if c <= 0:
        raise DomainError(f"critical point {c:.3g} is not positive at eps={eps:.3g}")
    return c


def power_critical_m(spec: KernelSpec, rho: float, c2: float, eps: float) -> float:
    """Critical point of the power-law lower-bound envelope.

    c = (c2 Gamma(alpha+1) Gamma(alpha+beta+2) / (3 Gamma(beta+1) eps^(1/2)))^(1/(rho+d-1)) e^(-1/d)
    """
    if not (rho > 1 and c2 > 0 and eps > 0):
        raise DomainError("need rho > 1, c2 > 0 and eps > 0")
    manifold = spec.manifold
    d, alpha, beta = manifold.d, manifold.alpha, manifold.beta
    log_base = (
        math.log(c2)
        + ln_gamma(alpha + 1)
        + ln_gamma(alpha + beta + 2)
        - math.log(3.0)
        - ln_gamma(beta + 1)
        - 0.5 * math.log(eps)
    )
    return math.exp(log_base / (rho + d - 1) - 1.0 / d)


# === Asymptotic constants ===


def _geometric_upper_constant(manifold: ManifoldSpec, theta: float) -> float:
    d = manifold.d
    return 2.0 ** (d + 1) * dim_growth_constant(manifold) / math.log(1.0 / theta) ** d


def _geometric_lower_constant(manifold: ManifoldSpec, delta: float) -> float:
    d = manifold.d
    return (
        dim_growth_constant(manifold)
        * 2.0 ** (d - 1)
        * d ** d
        / ((math.log(1.0 / delta) + d - 1) ** d * (d + 1) ** (d + 1))
    )


def _power_upper_constant(manifold: ManifoldSpec, gamma: float, c1: float) -> float:
    d = manifold.d
    return dim_growth_constant(manifold) * (4.0 * c1 / (gamma + d - 1)) ** (d / (gamma + d - 1))


def _power_lower_constant(manifold: ManifoldSpec, rho: float, c2: float) -> float:
    d, alpha, beta = manifold.d, manifold.alpha, manifold.beta
    base = math.exp(
        math.log(c2)
        + ln_gamma(alpha + 1)
        + ln_gamma(alpha + beta + 2)
        - math.log(3.0)
        - ln_gamma(beta + 1)
    )
    return (
        math.exp(-1.0)
        * (rho + d - 1)
        * dim_growth_constant(manifold)
        / d
        * base ** (d / (rho + d - 1))
    )


def default_regimes(spec: KernelSpec) -> List[Regime]:
    """Regimes whose hypotheses the model implies in closed form."""
    regimes = []
    model = spec.model
    if isinstance(model, (GeometricModel, GaussianTypeModel, GaussianSphereModel)):
        if geometric_envelope(spec) is not None:
            regimes.append(Regime.GEOMETRIC_UPPER)
        if isinstance(model, (GeometricModel, GaussianTypeModel)) and spec.manifold.has_odd_levels:
            regimes.append(Regime.GEOMETRIC_LOWER)
    elif isinstance(model, PowerLawModel):
        if model.p > spec.manifold.d:
            regimes.append(Regime.POWER_UPPER)
        if model.a0 > 0 and spec.manifold.has_odd_levels:
            regimes.append(Regime.POWER_LOWER)
    return regimes


def default_params(spec: KernelSpec, regime: Regime) -> Dict[str, float]:
    """Hypothesis parameters read off the model's closed form.

    Raises:
    - HypothesisNotCertified: if the model does not fit the regime.
    """
    regime = Regime(regime)
    model = spec.model
    if regime not in default_regimes(spec):
        raise HypothesisNotCertified(f"{model.type} on {spec.manifold.label} does not fit {regime.value}")
    if regime is Regime.GEOMETRIC_UPPER:
        a0, theta = geometric_envelope(spec)
        return {"theta": theta, "a0": a0}
    if regime is Regime.GEOMETRIC_LOWER:
        delta = model.ratio if isinstance(model, GeometricModel) else model.delta
        return {"delta": delta, "a0": coefficient(spec, 0)}
    if regime is Regime.POWER_UPPER:
        return {"gamma": model.p - spec.manifold.d, "c1": model.c}
    return {"rho": model.p, "c2": model.c, "a0": model.a0}


def _certify(spec: KernelSpec, regime: Regime, params: Dict[str, float]) -> str:
    """Return how the regime's hypothesis was established, or raise."""
    if regime in default_regimes(spec):
        closed = default_params(spec, regime)
        if regime is Regime.GEOMETRIC_UPPER and params["theta"] >= closed["theta"]:
            return "closed_form"
        if regime is Regime.GEOMETRIC_LOWER and params["delta"] <= closed["delta"]:
            return "closed_form"
        if regime is Regime.POWER_UPPER and (
                params["gamma"] <= closed["gamma"] and params["c1"] >= closed["c1"]):
            return "closed_form"
        if regime is Regime.POWER_LOWER and (
                params["rho"] >= closed["rho"] and params["c2"] <= closed["c2"]):
            return "closed_form"

    k_max = CERTIFY_K_MAX
    d = spec.manifold.d
    try:
        if regime is Regime.GEOMETRIC_UPPER:
            ok = decay_ratio_range(spec, k_max)[1] <= params["theta"]
        elif regime is Regime.GEOMETRIC_LOWER:
            ok = decay_ratio_range(spec, k_max)[0] >= params["delta"]
        elif regime is Regime.POWER_UPPER:
            ok = all(
                coefficient(spec, k) * k ** (d + params["gamma"]) <= params["c1"]
                for k in range(1, k_max + 1)
            )
        else:
            ok = all(
                coefficient(spec, k) * k ** params["rho"] >= params["c2"]
                for k in range(1, k_max + 1)
            )
    except ZeroCoefficient as e:
        raise HypothesisNotCertified(str(e)) from e
    if not ok:
        raise HypothesisNotCertified(
            f"{spec.model.type} on {spec.manifold.label} violates {regime.value} with {params}"
        )
    logger.warning("%s hypothesis checked on levels up to %d only", regime.value, k_max)
    return "empirical"


_REQUIRED = {
    Regime.GEOMETRIC_UPPER: ("theta",),
    Regime.GEOMETRIC_LOWER: ("delta",),
    Regime.POWER_UPPER: ("gamma", "c1"),
    Regime.POWER_LOWER: ("rho", "c2"),
}


def asymptotic_constant(
        spec: KernelSpec, regime: Regime, params: Optional[Dict[str, float]] = None
) -> AsymptoticReport:
    """Evaluate a limit theorem's constant for the kernel.

    params default to the model's closed-form values (default_params).

    Raises:
    - HypothesisNotCertified: if the coefficients do not satisfy the regime's hypothesis.
    - DomainError: for parameters outside the theorem's range.
    """
    regime = Regime(regime)
    params = dict(default_params(spec, regime) if params is None else params)
    missing = [name for name in _REQUIRED[regime] if name not in params]
    if missing:
        raise DomainError(f"{regime.value} needs parameters {', '.join(missing)}")
    manifold = spec.manifold
    d = manifold.d

    if regime is Regime.GEOMETRIC_UPPER:
        if not 0 < params["theta"] < 1:
            raise DomainError("theta must lie in (0, 1)")
        certified_by = _certify(spec, regime, params)
        return AsymptoticReport(
            regime, _geometric_upper_constant(manifold, params["theta"]),
            eps_exponent=0.0, log_exponent=d + 1, params=params, certified_by=certified_by,
        )

    if regime is Regime.GEOMETRIC_LOWER:
        if not 0 < params["delta"] < 1:
            raise DomainError("delta must lie in (0, 1)")
        certified_by = _certify(spec, regime, params)
        a0 = params.get("a0", _first_positive_coefficient(spec))
        scale = math.exp(
            math.log(a0)
            + ln_gamma(manifold.alpha + 1)
            + ln_gamma(manifold.alpha + manifold.beta + 2)
            - math.log(3.0)
            - ln_gamma(manifold.beta + 1)
        )
        requires_rescaling = scale < 1
        if requires_rescaling:
            logger.warning("geometric lower constant assumes a rescaled kernel (scale %.3g < 1)", scale)
        return AsymptoticReport(
            regime, _geometric_lower_constant(manifold, params["delta"]),
            eps_exponent=0.0, log_exponent=d + 1, params=params,
            requires_rescaling=requires_rescaling, certified_by=certified_by,
        )

    if regime is Regime.POWER_UPPER:
        gamma, c1 = params["gamma"], params["c1"]
        if not (gamma > 0 and c1 > 0):
            raise DomainError("need gamma > 0 and c1 > 0")
        certified_by = _certify(spec, regime, params)
        return AsymptoticReport(
            regime, _power_upper_constant(manifold, gamma, c1),
            eps_exponent=2.0 * d / (gamma + d - 1), log_exponent=1.0,
            params=params, certified_by=certified_by,
        )

    rho, c2 = params["rho"], params["c2"]
    if not (rho > 1 and c2 > 0):
        raise DomainError("need rho > 1 and c2 > 0")
    a0 = params.setdefault("a0", coefficient(spec, 0))
    if not a0 > 0:
        raise HypothesisNotCertified("the power lower regime needs a_0 > 0")
    certified_by = _certify(spec, regime, params)
    return AsymptoticReport(
        regime, _power_lower_constant(manifold, rho, c2),
        eps_exponent=d / (2.0 * (rho + d - 1)), log_exponent=0.0,
        params=params, offset=0.5 * math.log(a0), certified_by=certified_by,
    )


def asymptotic_cutoff(
        spec: KernelSpec, regime: Regime, params: Optional[Dict[str, float]], eps: float
) -> float:
    """Level predicted by the regime's asymptotics at eps.

    Upper regimes give the truncation level: 2 ln(2 sqrt(a0) / (eps sqrt(1-theta))) / ln(1/theta)
    for geometric decay and (4 c1/(gamma+d-1))^(1/(gamma+d-1)) eps^(-2/(gamma+d-1)) for power
    laws. Lower regimes give the critical point of the J_m envelope.
    """
    regime = Regime(regime)
    params = dict(default_params(spec, regime) if params is None else params)
    d = spec.manifold.d
    if regime is Regime.GEOMETRIC_UPPER:
        theta = params["theta"]
        a0 = params.get("a0", coefficient(spec, 0))
        return 2.0 * math.log(2.0 * math.sqrt(a0) / (eps * math.sqrt(1.0 - theta))) / math.log(1.0 / theta)
    if regime is Regime.GEOMETRIC_LOWER:
        return critical_m_geometric(spec, params["delta"], eps)
    if regime is Regime.POWER_UPPER:
        gamma, c1 = params["gamma"], params["c1"]
        exponent = gamma + d - 1
        return (4.0 * c1 / exponent) ** (1.0 / exponent) * eps ** (-2.0 / exponent)
    return power_critical_m(spec, params["rho"], params["c2"], eps)


def gaussian_upper_constant(rho: float, d: int) -> float:
    """4 / (d! [ln(rho / sqrt 2)]^d), the upper constant of the Gaussian kernel on S^d.

    Raises:
    - DomainError: unless rho^2 > 2.
    """
    if not rho > math.sqrt(2.0):
        raise DomainError(f"need rho^2 > 2, got rho={rho}")
    return 4.0 / (math.factorial(d) * math.log(rho / math.sqrt(2.0)) ** d)


def gaussian_type_constants(delta: float, d: int) -> Tuple[float, float]:
    """(lower, upper) constants for a_k = delta^k tau_k on S^d against [2 ln(1/eps)]^(d+1).

    lower = 1/(2 (d+1)!) [(d/(d+1)) / ln(e^(d-1)/delta)]^d
    upper = 2 / (d! [ln(1/(delta (d+3)))]^d) for d >= 2, and 2 / ln(1/delta) for d = 1.

    Raises:
    - DomainError: if delta >= 1/(d+3) for d >= 2, or delta >= 1 for d = 1.
    """
    if d < 1:
        raise DomainError("d must be positive")
    limit = 1.0 if d == 1 else 1.0 / (d + 3)
    if not 0 < delta < limit:
        raise DomainError(f"delta must lie in (0, {limit:.6g}) for d={d}")
    theta = delta if d == 1 else delta * (d + 3)
    lower = (d / (d + 1) / (d - 1 + math.log(1.0 / delta))) ** d / (2.0 * math.factorial(d + 1))
    upper = 2.0 / (math.factorial(d) * math.log(1.0 / theta) ** d)
    return lower, upper


def harmonic_example_constants(manifold: ManifoldSpec, gamma: float) -> Dict[str, float]:
    """Constants of the kernel a_0 = 1, a_k = k^(-d-gamma).

    The upper regime is applied with c1 = 1 and the lower one with rho = gamma + d,
    c2 = 1. Scaled values divide by dim_growth_constant, which is 2/d! on S^d.
    """
    if not gamma > 0:
        raise DomainError("gamma must be positive")
    d = manifold.d
    growth = dim_growth_constant(manifold)
    upper = _power_upper_constant(manifold, gamma, 1.0)
    lower = _power_lower_constant(manifold, gamma + d, 1.0)
    return {
        "upper": upper,
        "lower": lower,
        "upper_scaled": upper / growth,
        "lower_scaled": lower / growth,
        "upper_eps_exponent": 2.0 * d / (gamma + d - 1),
        "lower_eps_exponent": d / (2.0 * (2 * d + gamma - 1)),
    }


def weak_equivalence_report(spec: KernelSpec, eps_grid: Iterable[float]) -> List[Dict[str, float]]:
    """Bounds divided by [ln(1/eps)]^(d+1) over a grid of eps < 1.

    Raises:
    - HypothesisNotCertified: unless both geometric regimes apply to the model.
    """
    regimes = default_regimes(spec)
    if Regime.GEOMETRIC_UPPER not in regimes or Regime.GEOMETRIC_LOWER not in regimes:
        raise HypothesisNotCertified("weak equivalence needs geometric decay from above and below")
    exponent = spec.manifold.d + 1
    report = []
    for eps in eps_grid:
        if not 0 < eps < 1:
            raise DomainError("eps must lie in (0, 1)")
        scale = math.log(1.0 / eps) ** exponent
        upper, _ = upper_bound_lnC(spec, eps)
        lower, _ = lower_bound_lnC(spec, eps)
        report.append({"eps": eps, "upper_ratio": upper / scale, "lower_ratio": lower / scale})
    return report
