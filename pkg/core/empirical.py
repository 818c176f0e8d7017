"""Seeded Monte Carlo packing estimates on S^1 and S^2.

Functions in the truncated unit ball are g = sum_{k<=m} eta_k sum_j c_k^j S_k^j
with ||c|| <= 1, eta_k = sqrt(a_k / tau_k) and {S_k^j} an orthonormal basis of
the k-th eigenspace for the normalized surface measure. Each such g lies in
the image of the RKHS unit ball. Sampled on N ambient points, sup distances
can only shrink, so a 2 eps-separated family under the sampled sup-seminorm is
2 eps-separated for the true sup-norm and its size is a lower bound for
C(eps, I_K).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np
from scipy.special import sph_harm_y

from config import DEFAULT_AMBIENT_POINTS, DEFAULT_BALL_DRAWS, DEFAULT_SEED, EMPIRICAL_MAX_DIM
from .bounds import upper_bound_lnC
from .errors import DegenerateKernel, DomainError, Unsupported
from .kernels import KernelSpec, coefficient_array
from .manifold import SpaceClass, cumulative_dim, eigenspace_dim

logger = logging.getLogger(__name__)

_GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


@dataclass(frozen=True)
class SamplePlan:
    """Sizes and seed of one Monte Carlo run.

    Attributes:
    - ambient_points: N >= 16 points where functions are sampled.
    - ball_draws: number of coefficient vectors drawn, >= 100.
    - m: truncation level, >= 1.
    - seed: unsigned 64-bit seed.
    """

    ambient_points: int = DEFAULT_AMBIENT_POINTS
    ball_draws: int = DEFAULT_BALL_DRAWS
    m: int = 1
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.ambient_points < 16:
            raise DomainError("ambient_points must be at least 16")
        if self.ball_draws < 100:
            raise DomainError("ball_draws must be at least 100")
        if self.m < 1:
            raise DomainError("m must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be an unsigned 64-bit integer")

    def as_dict(self) -> Dict[str, Any]:
        return {
            "ambient_points": self.ambient_points,
            "ball_draws": self.ball_draws,
            "m": self.m,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class PackingEstimate:
    """Size of a greedy 2 eps-packing; ln(count) <= ln C(eps, I_K)."""

    eps: float
    count: int
    plan: SamplePlan

    def as_dict(self) -> Dict[str, Any]:
        return {"eps": self.eps, "count": self.count, "plan": self.plan.as_dict()}


def _check_sphere(spec: KernelSpec) -> int:
    manifold = spec.manifold
    if manifold.space_class is not SpaceClass.SPHERE or manifold.d not in (1, 2):
        raise Unsupported(f"empirical estimates need S^1 or S^2, got {manifold.label}")
    return manifold.d


def default_plan(
        spec: KernelSpec,
        eps: float,
        ambient_points: Optional[int] = None,
        ball_draws: Optional[int] = None,
        seed: int = DEFAULT_SEED,
) -> SamplePlan:
    """Plan whose truncation level is the upper-bound cutoff at eps (at least 1)."""
    _, m = upper_bound_lnC(spec, eps)
    return SamplePlan(
        ambient_points=DEFAULT_AMBIENT_POINTS if ambient_points is None else ambient_points,
        ball_draws=DEFAULT_BALL_DRAWS if ball_draws is None else ball_draws,
        m=max(1, m),
        seed=seed,
    )


def feature_dim_fits(spec: KernelSpec, plan: SamplePlan) -> bool:
    """Whether dim V_m of the plan is within EMPIRICAL_MAX_DIM."""
    return cumulative_dim(spec.manifold, plan.m, limit=None) <= EMPIRICAL_MAX_DIM


def sample_points(d: int, n: int, seed: Optional[int] = None) -> np.ndarray:
    """n deterministic points on S^d as rows of an (n, d+1) array.

    S^1 uses the angles 2 pi j / n; S^2 uses a Fibonacci lattice. The seed is
    accepted for symmetry with the random samplers and ignored.
    """
    j = np.arange(n, dtype=float)
    if d == 1:
        angles = 2.0 * math.pi * j / n
        return np.column_stack([np.cos(angles), np.sin(angles)])
    if d == 2:
        z = 1.0 - (2.0 * j + 1.0) / n
        radius = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        azimuth = _GOLDEN_ANGLE * j
        return np.column_stack([radius * np.cos(azimuth), radius * np.sin(azimuth), z])
    raise Unsupported(f"sample points are available on S^1 and S^2, got d={d}")


def _circle_harmonics(m: int, points: np.ndarray) -> np.ndarray:
    theta = np.arctan2(points[:, 1], points[:, 0])
    columns = [np.ones_like(theta)]
    for k in range(1, m + 1):
        columns.append(math.sqrt(2.0) * np.cos(k * theta))
        columns.append(math.sqrt(2.0) * np.sin(k * theta))
    return np.column_stack(columns)


def _sphere_harmonics(m: int, points: np.ndarray) -> np.ndarray:
    polar = np.arccos(np.clip(points[:, 2], -1.0, 1.0))
    azimuth = np.arctan2(points[:, 1], points[:, 0])
    scale = math.sqrt(4.0 * math.pi)
    columns = []
    for k in range(m + 1):
        for order in range(-k, k + 1):
            value = sph_harm_y(k, abs(order), polar, azimuth)
            if order > 0:
                columns.append(scale * math.sqrt(2.0) * value.real)
            elif order < 0:
                columns.append(scale * math.sqrt(2.0) * value.imag)
            else:
                columns.append(scale * value.real)
    return np.column_stack(columns)


def feature_map(spec: KernelSpec, m: int, points) -> np.ndarray:
    """Return (eta_k S_k^j(x)) for k <= m, one row per point.

    The inner product of two rows equals sum_{k<=m} a_k J_k(x . y). A single
    point gives a single vector of length dim V_m.
    """
    d = _check_sphere(spec)
    array = np.asarray(points, dtype=float)
    single = array.ndim == 1
    array = np.atleast_2d(array)
    if d == 1 and array.shape[1] == 1:
        array = np.column_stack([np.cos(array[:, 0]), np.sin(array[:, 0])])
    if array.shape[1] != d + 1:
        raise DomainError(f"points on S^{d} need {d + 1} coordinates")

    harmonics = _circle_harmonics(m, array) if d == 1 else _sphere_harmonics(m, array)
    taus = np.array([eigenspace_dim(spec.manifold, k) for k in range(m + 1)])
    etas = np.repeat(np.sqrt(coefficient_array(spec, m) / taus), taus)
    features = harmonics * etas
    return features[0] if single else features


def sample_ball(dim: int, count: int, seed: int) -> np.ndarray:
    """count uniform points of the unit ball in R^dim, as a (count, dim) array.

    Directions and radii come from two independent child streams of the seed,
    so the first n rows do not depend on count.
    """
    if dim < 1 or count < 1:
        raise DomainError("dim and count must be positive")
    direction_seed, radius_seed = np.random.SeedSequence(seed).spawn(2)
    directions = np.random.default_rng(direction_seed).standard_normal((count, dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = np.random.default_rng(radius_seed).random(count) ** (1.0 / dim)
    return directions * radii[:, None]


def evaluate_sample(spec: KernelSpec, plan: SamplePlan) -> np.ndarray:
    """Values of the drawn functions at the ambient points, shape (ball_draws, N).

    Raises:
    - Unsupported: off S^1 and S^2, or when dim V_m exceeds EMPIRICAL_MAX_DIM.
    - DegenerateKernel: if a_0, ..., a_m all vanish.
    """
    d = _check_sphere(spec)
    if not feature_dim_fits(spec, plan):
        raise Unsupported(
            f"truncation level {plan.m} needs {cumulative_dim(spec.manifold, plan.m, limit=None)} features, "
            f"above the limit {EMPIRICAL_MAX_DIM}"
        )
    if not np.any(coefficient_array(spec, plan.m) > 0):
        raise DegenerateKernel(f"all coefficients up to level {plan.m} vanish")
    features = feature_map(spec, plan.m, sample_points(d, plan.ambient_points, plan.seed))
    dim = cumulative_dim(spec.manifold, plan.m)
    coefficients = sample_ball(dim, plan.ball_draws, plan.seed)
    return coefficients @ features.T


def _greedy_centers(values: np.ndarray, radius: float) -> int:
    """First-fit count of rows that are farther than radius from every kept row."""
    centers = np.empty_like(values)
    centers[0] = values[0]
    count = 1
    for row in values[1:]:
        distances = np.max(np.abs(centers[:count] - row), axis=1)
        if np.all(distances > radius):
            centers[count] = row
            count += 1
    return count


def packing_lower_estimate(spec: KernelSpec, eps: float, plan: SamplePlan) -> PackingEstimate:
    """Greedy 2 eps-separated subset of the drawn functions under the sampled sup-seminorm."""
    if not eps > 0:
        raise DomainError("eps must be positive")
    values = evaluate_sample(spec, plan)
    count = _greedy_centers(values, 2.0 * eps)
    logger.debug("packing at eps=%.3g: %d of %d draws", eps, count, plan.ball_draws)
    return PackingEstimate(eps=eps, count=count, plan=plan)


def greedy_cover_heuristic(spec: KernelSpec, eps: float, plan: SamplePlan) -> int:
    """Greedy eps-cover size of the drawn sample.

    A heuristic only: it is neither an upper nor a lower bound on C(eps, I_K).
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    return _greedy_centers(evaluate_sample(spec, plan), eps)
