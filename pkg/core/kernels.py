"""Zonal kernels given by their coefficient sequences.

A kernel on a manifold M^d is K(x, y) = sum_k a_k J_k(cos d(x, y)), where J_k
is the Jacobi polynomial of the manifold normalized to J_k(1) = 1 and {a_k}
are non-negative and summable. The coefficient models are:

- GeometricModel: a_k = a0 theta^k
- PowerLawModel: a_0 = a0, a_k = c k^(-p) for k >= 1
- GaussianSphereModel: a_k = lambda_k tau_k, the Gaussian kernel on S^d, d >= 2
- GaussianTypeModel: a_k = delta^k tau_k on S^d
- ExplicitModel: a finite list a_0, ..., a_M, zero beyond

On real projective spaces the odd levels vanish, so every model reads zero
there. The squared embedding norms are coefficient sums: kappa^2 = sum a_k,
kappa_m^2 = sum_{k <= m} a_k and (kappa_m^s)^2 = sum_{k > m} a_k.

The reproducing space itself is the weighted sequence space with
g = sum_k eta_k sum_j c_k^j S_k^j and eta_k = sqrt(a_k / tau_k); it is only
realized concretely in core.empirical.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, ClassVar, Dict, Optional, Tuple

import numpy as np
from scipy.special import zeta

from config import KERNEL_TOL, LEVEL_LIMIT, QUADRATURE_NODES
from .errors import (
    DomainError,
    LevelOverflow,
    ModelMismatch,
    NotSummable,
    QuadratureFailure,
    SchemaError,
    Unsupported,
    ZeroCoefficient,
)
from .manifold import ManifoldSpec, SpaceClass, eigenspace_dim
from .specfun import (
    JacobiParams,
    jacobi_eval,
    jacobi_norm_h,
    jacobi_weighted_angle_rule,
    ln_gamma,
    ln_jacobi_at_one,
    log_bessel_i,
    normalized_jacobi_series,
)

logger = logging.getLogger(__name__)

# relative size of the certified remainder at which tail summation stops
_SUM_RTOL = 1e-17


def _require(condition: bool, field: str, message: str) -> None:
    if not condition:
        raise SchemaError(f"model.{field}", message)


def _number(dictionary: Dict[str, Any], name: str, field: str, default: Any = None) -> float:
    value = dictionary.get(name, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise SchemaError(f"{field}.{name}", "expected a finite number")
    return float(value)


@dataclass(frozen=True)
class CoefficientModel:
    """Base class for closed-form coefficient rules.

    Subclasses set the `type` tag used in the KernelSpec JSON and validate
    their parameters on construction (SchemaError naming the field).
    """

    type: ClassVar[str] = ""

    def as_dict(self) -> Dict[str, Any]:
        """Serialize to the KernelSpec JSON "model" object."""
        return {"type": self.type}

    @staticmethod
    def from_dict(dictionary: Dict[str, Any], field: str = "model") -> CoefficientModel:
        """Create the concrete model named by dictionary["type"]."""
        if not isinstance(dictionary, dict):
            raise SchemaError(field, "expected an object")
        model_type = dictionary.get("type")
        if model_type == GeometricModel.type:
            return GeometricModel(
                a0=_number(dictionary, "a0", field, 1.0),
                ratio=_number(dictionary, "ratio", field),
            )
        if model_type == PowerLawModel.type:
            return PowerLawModel(
                c=_number(dictionary, "c", field),
                p=_number(dictionary, "p", field),
                a0=_number(dictionary, "a0", field, 1.0),
            )
        if model_type == GaussianSphereModel.type:
            return GaussianSphereModel(rho=_number(dictionary, "rho", field))
        if model_type == GaussianTypeModel.type:
            return GaussianTypeModel(delta=_number(dictionary, "delta", field))
        if model_type == ExplicitModel.type:
            raw = dictionary.get("coefficients")
            if not isinstance(raw, list) or not raw:
                raise SchemaError(f"{field}.coefficients", "expected a non-empty list")
            values = []
            for index, value in enumerate(raw):
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise SchemaError(f"{field}.coefficients[{index}]", "expected a number")
                values.append(float(value))
            return ExplicitModel(coefficients=tuple(values))
        allowed = "|".join(
            cls.type for cls in (
                GeometricModel, PowerLawModel, GaussianSphereModel, GaussianTypeModel, ExplicitModel
            )
        )
        raise SchemaError(f"{field}.type", f"expected one of {allowed}, got {model_type!r}")


@dataclass(frozen=True)
class GeometricModel(CoefficientModel):
    """a_k = a0 * ratio^k with 0 < ratio < 1."""

    type: ClassVar[str] = "geometric"
    a0: float = 1.0
    ratio: float = 0.5

    def __post_init__(self) -> None:
        _require(self.a0 > 0, "a0", "must be positive")
        _require(0 < self.ratio < 1, "ratio", "must lie in (0, 1)")

    def as_dict(self) -> Dict[str, Any]:
        data = super().as_dict()
        data.update({"a0": self.a0, "ratio": self.ratio})
        return data


@dataclass(frozen=True)
class PowerLawModel(CoefficientModel):
    """a_k = c k^(-p) for k >= 1, with a_0 pinned separately.

    a0 may be zero; lower bounds then start from the first positive level.
    """

    type: ClassVar[str] = "power_law"
    c: float = 1.0
    p: float = 3.0
    a0: float = 1.0

    def __post_init__(self) -> None:
        _require(self.c > 0, "c", "must be positive")
        _require(self.p > 1, "p", "must exceed 1")
        _require(self.a0 >= 0, "a0", "must be non-negative")

    def as_dict(self) -> Dict[str, Any]:
        data = super().as_dict()
        data.update({"c": self.c, "p": self.p, "a0": self.a0})
        return data


@dataclass(frozen=True)
class GaussianSphereModel(CoefficientModel):
    """The Gaussian kernel exp(-2 rho^-2 (1 - t)) on S^d, d >= 2."""

    type: ClassVar[str] = "gaussian_sphere"
    rho: float = 2.0

    def __post_init__(self) -> None:
        _require(self.rho > 0, "rho", "must be positive")

    def as_dict(self) -> Dict[str, Any]:
        data = super().as_dict()
        data["rho"] = self.rho
        return data


@dataclass(frozen=True)
class GaussianTypeModel(CoefficientModel):
    """a_k = delta^k tau_k on S^d with 0 < delta < 1."""

    type: ClassVar[str] = "gaussian_type"
    delta: float = 0.1

    def __post_init__(self) -> None:
        _require(0 < self.delta < 1, "delta", "must lie in (0, 1)")

    def as_dict(self) -> Dict[str, Any]:
        data = super().as_dict()
        data["delta"] = self.delta
        return data


@dataclass(frozen=True)
class ExplicitModel(CoefficientModel):
    """A finite coefficient list a_0, ..., a_M; zero beyond M."""

    type: ClassVar[str] = "explicit"
    coefficients: Tuple[float, ...] = (1.0,)

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients", tuple(float(v) for v in self.coefficients))
        _require(len(self.coefficients) > 0, "coefficients", "must not be empty")
        for index, value in enumerate(self.coefficients):
            _require(
                math.isfinite(value) and value >= 0,
                f"coefficients[{index}]",
                "must be a finite non-negative number",
            )

    @property
    def support_end(self) -> int:
        """Largest index with a stored coefficient."""
        return len(self.coefficients) - 1

    def as_dict(self) -> Dict[str, Any]:
        data = super().as_dict()
        data["coefficients"] = list(self.coefficients)
        return data


_SPHERE_ONLY = (GaussianSphereModel, GaussianTypeModel)


@dataclass(frozen=True)
class KernelSpec:
    """A manifold together with a coefficient model.

    Raises:
    - ModelMismatch: for Gaussian models off the sphere, or GaussianSphere on S^1.
    """

    manifold: ManifoldSpec
    model: CoefficientModel

    def __post_init__(self) -> None:
        if isinstance(self.model, _SPHERE_ONLY):
            if self.manifold.space_class is not SpaceClass.SPHERE:
                raise ModelMismatch(
                    f"{self.model.type} is defined on spheres only, got {self.manifold.label}"
                )
            if isinstance(self.model, GaussianSphereModel) and self.manifold.d < 2:
                raise ModelMismatch("gaussian_sphere requires d >= 2")

    @property
    def jacobi(self) -> JacobiParams:
        return JacobiParams(self.manifold.alpha, self.manifold.beta)

    def as_dict(self) -> Dict[str, Any]:
        return {"manifold": self.manifold.as_dict(), "model": self.model.as_dict()}

    @staticmethod
    def from_dict(dictionary: Dict[str, Any]) -> KernelSpec:
        """Validate a parsed KernelSpec JSON document; SchemaError names the bad field."""
        if not isinstance(dictionary, dict):
            raise SchemaError("<root>", "expected an object")
        manifold = ManifoldSpec.from_dict(dictionary.get("manifold"), "manifold")
        model = CoefficientModel.from_dict(dictionary.get("model"), "model")
        try:
            return KernelSpec(manifold=manifold, model=model)
        except ModelMismatch as e:
            raise SchemaError("model.type", str(e)) from e


# === Coefficients ===


def gaussian_log_coefficient(rho: float, d: int, k: int) -> float:
    """ln lambda_k for the Gaussian kernel on S^d."""
    if d < 2:
        raise DomainError(f"the Gaussian coefficients need d >= 2, got d={d}")
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    z = 2.0 / (rho * rho)
    return (
        -z
        + (d - 1) * math.log(rho)
        + ln_gamma((d + 1) / 2)
        + log_bessel_i(k + (d - 1) / 2, z)
    )


def gaussian_coefficient(rho: float, d: int, k: int) -> float:
    """Return lambda_k = e^(-2/rho^2) rho^(d-1) Gamma((d+1)/2) I_{k+(d-1)/2}(2/rho^2).

    These are the eigenvalues of the Gaussian kernel on S^d, so that
    a_k = lambda_k tau_k. Strictly positive and strictly decreasing in k.
    """
    return math.exp(gaussian_log_coefficient(rho, d, k))


def gaussian_kernel_closed_form(rho: float, t):
    """exp(-2 rho^-2 (1 - t)), the Gaussian kernel as a function of t = cos d(x, y)."""
    return np.exp(-2.0 * (1.0 - np.asarray(t, dtype=float)) / (rho * rho))


def log_coefficient(spec: KernelSpec, k: int) -> float:
    """Return ln a_k, or -inf for vanishing levels."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if not spec.manifold.has_odd_levels and k % 2 == 1:
        return -math.inf
    model = spec.model
    if isinstance(model, GeometricModel):
        return math.log(model.a0) + k * math.log(model.ratio)
    if isinstance(model, PowerLawModel):
        if k == 0:
            return math.log(model.a0) if model.a0 > 0 else -math.inf
        return math.log(model.c) - model.p * math.log(k)
    if isinstance(model, GaussianSphereModel):
        tau = eigenspace_dim(spec.manifold, k, limit=None)
        return gaussian_log_coefficient(model.rho, spec.manifold.d, k) + math.log(tau)
    if isinstance(model, GaussianTypeModel):
        tau = eigenspace_dim(spec.manifold, k, limit=None)
        return k * math.log(model.delta) + math.log(tau)
    if isinstance(model, ExplicitModel):
        if k > model.support_end or model.coefficients[k] == 0:
            return -math.inf
        return math.log(model.coefficients[k])
    raise Unsupported(f"unknown coefficient model {type(model).__name__}")


def coefficient(spec: KernelSpec, k: int) -> float:
    """Return a_k per the model; 0 on vanishing levels."""
    return math.exp(log_coefficient(spec, k))


def coefficient_array(spec: KernelSpec, m: int) -> np.ndarray:
    """Return a_0, ..., a_m as an array."""
    model = spec.model
    ks = np.arange(m + 1, dtype=float)
    if isinstance(model, GeometricModel):
        values = model.a0 * np.power(model.ratio, ks)
    elif isinstance(model, PowerLawModel):
        values = np.empty(m + 1)
        values[0] = model.a0
        values[1:] = model.c * np.power(ks[1:], -model.p)
    else:
        return np.array([coefficient(spec, k) for k in range(m + 1)])
    if not spec.manifold.has_odd_levels:
        values[1::2] = 0.0
    return values


# === Norms and tails ===


def _first_even_above(m: int) -> int:
    return m + 1 if (m + 1) % 2 == 0 else m + 2


def _ratio_bound(spec: KernelSpec, k: int) -> float:
    """An upper bound on a_{j+1}/a_j for every j >= k (Gaussian models)."""
    d = spec.manifold.d
    model = spec.model
    if isinstance(model, GaussianSphereModel):
        return 2.0 / model.rho ** 2 * (k + d - 1) / ((2 * k + d - 1) * (k + 1))
    if isinstance(model, GaussianTypeModel):
        if d == 1:
            return model.delta * (2.0 if k == 0 else 1.0)
        return model.delta * (2 * k + d + 1) * (k + d - 1) / ((2 * k + d - 1) * (k + 1))
    raise Unsupported(f"no ratio bound for {model.type}")


def _summed_tail(spec: KernelSpec, m: int) -> float:
    """sum_{k > m} a_k by direct summation, stopped by a certified remainder."""
    total = 0.0
    k = m + 1
    while True:
        term = coefficient(spec, k)
        total += term
        ratio = _ratio_bound(spec, k)
        if ratio < 1 and term * ratio / (1 - ratio) <= _SUM_RTOL * total:
            return total
        k += 1
        if k > m + LEVEL_LIMIT:
            raise NotSummable(f"tail summation for {spec.model.type} did not settle")


def total_sum(spec: KernelSpec) -> float:
    """kappa^2 = sum_k a_k."""
    model = spec.model
    projective = not spec.manifold.has_odd_levels
    d = spec.manifold.d
    if isinstance(model, GeometricModel):
        return model.a0 / (1 - model.ratio ** 2) if projective else model.a0 / (1 - model.ratio)
    if isinstance(model, PowerLawModel):
        scale = 2.0 ** -model.p if projective else 1.0
        return model.a0 + model.c * scale * float(zeta(model.p))
    if isinstance(model, GaussianSphereModel):
        return 1.0
    if isinstance(model, GaussianTypeModel):
        return (1 + model.delta) / (1 - model.delta) ** d
    if isinstance(model, ExplicitModel):
        return math.fsum(coefficient(spec, k) for k in range(model.support_end + 1))
    raise NotSummable(f"cannot sum coefficients of {type(model).__name__}")


def tail_sum(spec: KernelSpec, m: int) -> float:
    """(kappa_m^s)^2 = sum_{k > m} a_k."""
    if m < 0:
        raise ValueError("m must be non-negative")
    model = spec.model
    projective = not spec.manifold.has_odd_levels
    if isinstance(model, GeometricModel):
        if projective:
            k0 = _first_even_above(m)
            return model.a0 * model.ratio ** k0 / (1 - model.ratio ** 2)
        return model.a0 * model.ratio ** (m + 1) / (1 - model.ratio)
    if isinstance(model, PowerLawModel):
        if projective:
            k0 = _first_even_above(m)
            return model.c * 2.0 ** -model.p * float(zeta(model.p, k0 / 2))
        return model.c * float(zeta(model.p, m + 1))
    if isinstance(model, (GaussianSphereModel, GaussianTypeModel)):
        return _summed_tail(spec, m)
    if isinstance(model, ExplicitModel):
        return math.fsum(coefficient(spec, k) for k in range(m + 1, model.support_end + 1))
    raise NotSummable(f"cannot sum coefficients of {type(model).__name__}")


def partial_sum(spec: KernelSpec, m: int) -> float:
    """kappa_m^2 = sum_{k <= m} a_k."""
    total = total_sum(spec)
    tail = tail_sum(spec, m)
    if tail <= 0.5 * total:
        return total - tail
    return math.fsum(coefficient_array(spec, m))


def embedding_norm(spec: KernelSpec) -> float:
    """kappa = ||I_K|| = sqrt(sum_k a_k)."""
    return math.sqrt(total_sum(spec))


def partial_norm(spec: KernelSpec, m: int) -> float:
    """kappa_m, the norm of the embedding restricted to levels k <= m."""
    return math.sqrt(partial_sum(spec, m))


def tail_norm(spec: KernelSpec, m: int) -> float:
    """kappa_m^s, the norm of the embedding restricted to levels k > m."""
    return math.sqrt(tail_sum(spec, m))


def geometric_envelope(spec: KernelSpec) -> Optional[Tuple[float, float]]:
    """Return (a0', theta) with a_k <= a0' theta^k for all k, or None.

    Only closed-form envelopes are reported; they drive tail_bound and the
    geometric asymptotic regimes.
    """
    model = spec.model
    d = spec.manifold.d
    if isinstance(model, GeometricModel):
        return model.a0, model.ratio
    if isinstance(model, GaussianTypeModel):
        if d == 1:
            return 2.0, model.delta
        theta = model.delta * (d + 3)
        return (1.0, theta) if theta < 1 else None
    if isinstance(model, GaussianSphereModel):
        if not model.rho > math.sqrt(2.0):
            return None
        return coefficient(spec, 0), 2.0 / model.rho ** 2
    return None


def tail_bound(spec: KernelSpec, m: int) -> float:
    """Closed-form upper bound on (kappa_m^s)^2.

    Geometric envelopes give a0' theta^(m+1) / (1 - theta). Power laws give
    c [(m+1)^(-p) + (m+1)^(1-p) / (p-1)], the first tail term plus the
    integral of x^(-p) beyond m+1.

    Raises:
    - Unsupported: for explicit lists and models without a certified envelope.
    """
    model = spec.model
    if isinstance(model, ExplicitModel):
        raise Unsupported("explicit coefficient lists have an exact tail; use tail_norm")
    if isinstance(model, PowerLawModel):
        n = m + 1
        return model.c * (n ** -model.p + n ** (1 - model.p) / (model.p - 1))
    envelope = geometric_envelope(spec)
    if envelope is None:
        raise Unsupported(f"no certified geometric envelope for {model.type} on {spec.manifold.label}")
    a0, theta = envelope
    return a0 * theta ** (m + 1) / (1 - theta)


def decay_ratio_range(spec: KernelSpec, k_max: int) -> Tuple[float, float]:
    """Return (min, max) of a_{k'}/a_k over consecutive nonzero levels k < k' <= k_max.

    Real projective spaces compare consecutive even levels. Explicit lists are
    inspected up to the end of their support.

    Raises:
    - ZeroCoefficient: if a coefficient on an existing level vanishes.
    """
    step = 1 if spec.manifold.has_odd_levels else 2
    if isinstance(spec.model, ExplicitModel):
        k_max = min(k_max, spec.model.support_end)
    if k_max < step:
        raise DomainError(f"k_max must be at least {step}")
    logs = []
    for k in range(0, k_max + 1, step):
        value = log_coefficient(spec, k)
        if value == -math.inf:
            raise ZeroCoefficient(f"a_{k} vanishes on {spec.manifold.label}")
        logs.append(value)
    ratios = np.exp(np.diff(logs))
    return float(ratios.min()), float(ratios.max())


# === Evaluation ===


def truncation_level(spec: KernelSpec, target: float, min_level: int = 0) -> int:
    """Return the least m >= min_level with sum_{k > m} a_k <= target.

    Exponential then bisection search over the non-increasing tail.

    Raises:
    - LevelOverflow: if no level up to LEVEL_LIMIT qualifies.
    """
    if tail_sum(spec, min_level) <= target:
        return min_level
    # invariant: tail_sum(lo) > target
    lo, hi = min_level, min_level + 1
    while tail_sum(spec, hi) > target:
        if hi >= LEVEL_LIMIT:
            raise LevelOverflow(f"tail above {target:.3g} at every level up to {LEVEL_LIMIT}")
        lo, hi = hi, min(min_level + 2 * (hi - min_level), LEVEL_LIMIT)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail_sum(spec, mid) <= target:
            hi = mid
        else:
            lo = mid
    logger.debug("truncation level %d for tail target %.3g", hi, target)
    return hi


def partial_kernel(spec: KernelSpec, m: int, t):
    """sum_{k <= m} a_k J_k(t)."""
    return normalized_jacobi_series(spec.jacobi, coefficient_array(spec, m), t)


def kernel_eval(spec: KernelSpec, t, tol: float = KERNEL_TOL, min_level: int = 0):
    """Evaluate K at t = cos d(x, y) to within tol.

    The series is cut at the least level whose coefficient tail is <= tol,
    which bounds the error since |J_k| <= 1. Accepts scalars or arrays.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    m = truncation_level(spec, tol, min_level)
    return partial_kernel(spec, m, t)


def _projection(spec: KernelSpec, k: int, n: int, tol: float) -> float:
    p = spec.jacobi
    t, w = jacobi_weighted_angle_rule(p, n)
    f = kernel_eval(spec, t, tol, min_level=k)
    integral = float(np.sum(w * f * jacobi_eval(p, k, t)))
    return math.exp(ln_jacobi_at_one(p, k)) / jacobi_norm_h(p, k) * integral


def recover_coefficient(
        spec: KernelSpec,
        k: int,
        quadrature_nodes: int = QUADRATURE_NODES,
        tol: float = 1e-10,
) -> float:
    """Recover a_k from kernel values by quadrature.

    a_k = P_k(1)/h_k * integral of K(t) P_k(t) (1-t)^alpha (1+t)^beta dt,
    integrated in the angle variable. The error is estimated by repeating the
    rule with half the nodes.

    Raises:
    - DomainError: for fewer than 64 nodes.
    - QuadratureFailure: if the two rules differ by more than tol (relative to max(1, |a_k|)).
    """
    if quadrature_nodes < 64:
        raise DomainError("quadrature needs at least 64 nodes")
    value = _projection(spec, k, quadrature_nodes, KERNEL_TOL)
    coarse = _projection(spec, k, quadrature_nodes // 2, KERNEL_TOL)
    error = abs(value - coarse)
    logger.debug("a_%d by quadrature: %.6g (error estimate %.2g)", k, value, error)
    if error > tol * max(1.0, abs(value)):
        raise QuadratureFailure(f"estimated error {error:.3g} for a_{k} exceeds {tol:.3g}")
    return value
