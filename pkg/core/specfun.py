"""Special functions needed by the bounds.

Log-gamma and the Stirling remainder, Jacobi polynomials (plain and
normalized to 1 at t = 1), their L2 norms, the modified Bessel function of the
first kind, and a Gauss-Legendre rule in the angle variable.

Scalar functions return floats. Jacobi evaluation also accepts numpy arrays
for t and then returns arrays of the same shape.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import gammaln

from .errors import DomainError

logger = logging.getLogger(__name__)

_HALF_LN_TWO_PI = 0.5 * math.log(2.0 * math.pi)
_SERIES_RTOL = 1e-17
_SERIES_MAX_TERMS = 100_000


@dataclass(frozen=True)
class JacobiParams:
    """Jacobi pair (alpha, beta), both > -1."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (self.alpha > -1 and self.beta > -1):
            raise DomainError(f"Jacobi parameters must exceed -1, got {self}")


def ln_gamma(x: float) -> float:
    """Return ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return float(gammaln(x))


def stirling_mu(x: float) -> float:
    """Return mu(x) = ln Gamma(x) - ln(sqrt(2 pi) x^(x-1/2) e^(-x)).

    Satisfies 0 < mu(x) < 1/(12 x).
    """
    if not x > 0:
        raise DomainError(f"stirling_mu requires x > 0, got {x}")
    return ln_gamma(x) - (_HALF_LN_TWO_PI + (x - 0.5) * math.log(x) - x)


def _check_interval(t) -> np.ndarray:
    values = np.asarray(t, dtype=float)
    if np.any(values < -1.0) or np.any(values > 1.0):
        raise DomainError("t must lie in [-1, 1]")
    return values


def _recurrence(a: float, b: float, k: int):
    """Coefficients (c1, c2, c3) with P_k = (c1 + c2 t) P_{k-1} - c3 P_{k-2}, k >= 2."""
    apb = a + b
    a1 = 2.0 * k * (k + apb) * (2.0 * k + apb - 2.0)
    a2 = (2.0 * k + apb - 1.0) * (a * a - b * b)
    a3 = (2.0 * k + apb - 2.0) * (2.0 * k + apb - 1.0) * (2.0 * k + apb)
    a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + apb)
    return a2 / a1, a3 / a1, a4 / a1


def jacobi_table(p: JacobiParams, k_max: int, t) -> np.ndarray:
    """Evaluate P_0, ..., P_{k_max} at t in one recurrence pass.

    Returns an array of shape (k_max + 1,) + shape(t).
    """
    values = _check_interval(t)
    a, b = p.alpha, p.beta
    table = np.empty((k_max + 1,) + values.shape)
    table[0] = 1.0
    if k_max >= 1:
        table[1] = (a + 1.0) + (a + b + 2.0) * (values - 1.0) / 2.0
    for k in range(2, k_max + 1):
        c1, c2, c3 = _recurrence(a, b, k)
        table[k] = (c1 + c2 * values) * table[k - 1] - c3 * table[k - 2]
    return table


def jacobi_eval(p: JacobiParams, k: int, t):
    """Return P_k^(alpha, beta)(t) by the three-term recurrence."""
    values = _check_interval(t)
    a, b = p.alpha, p.beta
    previous = np.ones_like(values)
    if k == 0:
        return previous if values.ndim else float(previous)
    current = (a + 1.0) + (a + b + 2.0) * (values - 1.0) / 2.0
    for n in range(2, k + 1):
        c1, c2, c3 = _recurrence(a, b, n)
        previous, current = current, (c1 + c2 * values) * current - c3 * previous
    return current if values.ndim else float(current)


def ln_jacobi_at_one(p: JacobiParams, k: int) -> float:
    """ln P_k(1) = ln Gamma(k+alpha+1) - ln k! - ln Gamma(alpha+1)."""
    return ln_gamma(k + p.alpha + 1) - ln_gamma(k + 1) - ln_gamma(p.alpha + 1)


def jacobi_at_one(p: JacobiParams, k: int) -> float:
    """Return P_k(1) = Gamma(k+alpha+1) / (k! Gamma(alpha+1)), the maximum of P_k on [-1, 1]."""
    return math.exp(ln_jacobi_at_one(p, k))


def jacobi_normalized(p: JacobiParams, k: int, t):
    """Return J_k(t) = P_k(t) / P_k(1); J_k(1) = 1 exactly."""
    values = _check_interval(t)
    result = np.asarray(jacobi_eval(p, k, values)) / jacobi_at_one(p, k)
    result = np.where(values == 1.0, 1.0, result)
    return result if values.ndim else float(result)


def normalized_jacobi_series(p: JacobiParams, weights, t):
    """Return sum_k weights[k] J_k(t) without storing the table of J_k.

    The recurrence runs once over all degrees, so long series (hundreds of
    thousands of terms) cost O(len(weights)) memory per evaluation point only.
    """
    values = _check_interval(t)
    weights = np.asarray(weights, dtype=float)
    k_max = len(weights) - 1
    if k_max < 0:
        raise DomainError("weights must not be empty")
    a, b = p.alpha, p.beta
    ks = np.arange(k_max + 1, dtype=float)
    ln_at_one = gammaln(ks + a + 1.0) - gammaln(ks + 1.0) - gammaln(a + 1.0)
    scaled = weights * np.exp(-ln_at_one)

    previous = np.ones_like(values)
    total = scaled[0] * previous
    if k_max >= 1:
        current = (a + 1.0) + (a + b + 2.0) * (values - 1.0) / 2.0
        total = total + scaled[1] * current
    for k in range(2, k_max + 1):
        c1, c2, c3 = _recurrence(a, b, k)
        previous, current = current, (c1 + c2 * values) * current - c3 * previous
        if scaled[k]:
            total = total + scaled[k] * current
    return total if values.ndim else float(total)


def jacobi_norm_h(p: JacobiParams, k: int) -> float:
    """Return h_k = integral of P_k^2 (1-t)^alpha (1+t)^beta over [-1, 1]."""
    a, b = p.alpha, p.beta
    if k == 0:
        # (2k+a+b+1) Gamma(k+a+b+1) -> Gamma(a+b+2) also covers a+b = -1
        log_h = (
            (a + b + 1.0) * math.log(2.0)
            + ln_gamma(a + 1)
            + ln_gamma(b + 1)
            - ln_gamma(a + b + 2)
        )
        return math.exp(log_h)
    log_h = (
        (a + b + 1.0) * math.log(2.0)
        - math.log(2 * k + a + b + 1)
        + ln_gamma(k + a + 1)
        + ln_gamma(k + b + 1)
        - ln_gamma(k + 1)
        - ln_gamma(k + a + b + 1)
    )
    return math.exp(log_h)


def log_bessel_i(nu: float, z: float) -> float:
    """Return ln I_nu(z) from the power series, summed in log space.

    The series is sum_j (z/2)^(nu+2j) / (j! Gamma(j+nu+1)); its terms are
    rescaled by the leading one so large orders do not underflow.
    """
    if z < 0:
        raise DomainError(f"bessel_i requires z >= 0, got {z}")
    if nu < -0.5:
        raise DomainError(f"bessel_i requires nu >= -1/2, got {nu}")
    if z == 0:
        if nu == 0:
            return 0.0
        if nu > 0:
            return -math.inf
        raise DomainError("I_nu(0) is infinite for nu < 0")

    quarter_z2 = 0.25 * z * z
    term, total = 1.0, 1.0
    for j in range(_SERIES_MAX_TERMS):
        term *= quarter_z2 / ((j + 1) * (j + nu + 1))
        total += term
        # terms decrease once j + 1 exceeds z/2, so the tail is then below term
        if j + 1 > 0.5 * z and term < _SERIES_RTOL * total:
            break
    else:
        logger.warning("Bessel series for nu=%s, z=%s hit the term limit", nu, z)
    return nu * math.log(0.5 * z) - ln_gamma(nu + 1) + math.log(total)


def bessel_i(nu: float, z: float) -> float:
    """Return I_nu(z), the modified Bessel function of the first kind."""
    return math.exp(log_bessel_i(nu, z))


def gauss_legendre_angle_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule for integrals over t in [-1, 1] taken in the angle.

    Nodes are placed on phi in [0, pi] and mapped to t = cos(phi); the weights
    carry the Jacobian sin(phi), so sum(w * g(t)) approximates the integral of
    g(t) dt. Integrands with Jacobi weights of manifold type become smooth in
    phi, which restores spectral convergence at the endpoints.
    """
    x, w = np.polynomial.legendre.leggauss(n)
    phi = 0.5 * math.pi * (x + 1.0)
    return np.cos(phi), 0.5 * math.pi * w * np.sin(phi)


def jacobi_weighted_angle_rule(p: JacobiParams, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """The angle rule with the Jacobi weight (1-t)^alpha (1+t)^beta folded in.

    The weight is formed from the half angles, 1 - t = 2 sin^2(phi/2) and
    1 + t = 2 cos^2(phi/2), so nodes near t = +-1 keep full relative precision.
    """
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.25 * math.pi * (x + 1.0)
    s, c = np.sin(half), np.cos(half)
    weight = (2.0 * s * s) ** p.alpha * (2.0 * c * c) ** p.beta
    # sin(phi) = 2 sin(phi/2) cos(phi/2)
    return np.cos(2.0 * half), 0.5 * math.pi * w * 2.0 * s * c * weight
