"""Tests for core.empirical.

Deterministic point sets, the truncated feature map, seeded ball sampling and
the greedy packing estimates on S^1 and S^2.
"""

import math

import numpy as np
import pytest

from core.bounds import upper_bound_lnC
from core.empirical import (
    PackingEstimate,
    SamplePlan,
    default_plan,
    evaluate_sample,
    feature_dim_fits,
    feature_map,
    greedy_cover_heuristic,
    packing_lower_estimate,
    sample_ball,
    sample_points,
)
from core.errors import DegenerateKernel, DomainError, Unsupported
from core.kernels import (
    ExplicitModel,
    GaussianTypeModel,
    GeometricModel,
    KernelSpec,
    PowerLawModel,
    embedding_norm,
    partial_kernel,
    partial_sum,
)
from core.manifold import SpaceClass, cumulative_dim, make_manifold

S1 = make_manifold(SpaceClass.SPHERE, 1)
S2 = make_manifold(SpaceClass.SPHERE, 2)

CIRCLE = KernelSpec(S1, GeometricModel(1.0, 0.5))
SPHERE = KernelSpec(S2, GeometricModel(1.0, 0.5))


def _random_unit_vectors(count: int, dim: int, seed: int) -> np.ndarray:
    """Gaussian vectors normalized onto the unit sphere."""
    vectors = np.random.default_rng(seed).standard_normal((count, dim))
    return vectors / np.linalg.norm(vectors, axis=1, keepdims=True)


def test_circle_points_are_equispaced():
    """Four points on S^1 sit at angles 0, pi/2, pi, 3 pi/2."""
    points = sample_points(1, 4)
    np.testing.assert_allclose(points, [[1, 0], [0, 1], [-1, 0], [0, -1]], atol=1e-15)


@pytest.mark.parametrize("d", [1, 2])
def test_points_are_deterministic_unit_vectors(d):
    """Same arguments, same points; every point has norm one."""
    first = sample_points(d, 100, 1)
    np.testing.assert_array_equal(first, sample_points(d, 100, 1))
    np.testing.assert_allclose(np.linalg.norm(first, axis=1), 1.0, atol=1e-14)


def test_sample_points_unsupported_dimension():
    """Point sets exist on S^1 and S^2 only."""
    with pytest.raises(Unsupported):
        sample_points(3, 10)


def test_feature_map_circle_example():
    """At angle 0 with a_k = 2^-k, m = 1: (1, sqrt(1/2), 0)."""
    features = feature_map(CIRCLE, 1, [0.0])
    np.testing.assert_allclose(features, [1.0, math.sqrt(0.5), 0.0], atol=1e-15)


@pytest.mark.parametrize(
    "spec",
    [CIRCLE, SPHERE, KernelSpec(S2, GaussianTypeModel(0.2)), KernelSpec(S1, ExplicitModel((0.0, 1.0, 0.0, 2.0)))],
)
def test_feature_inner_products_reproduce_kernel(spec):
    """<Phi(x), Phi(y)> = sum_{k<=m} a_k J_k(x . y)."""
    d = spec.manifold.d
    x = _random_unit_vectors(100, d + 1, 3)
    y = _random_unit_vectors(100, d + 1, 4)
    for m in (0, 3, 20):
        inner = np.sum(feature_map(spec, m, x) * feature_map(spec, m, y), axis=1)
        t = np.clip(np.sum(x * y, axis=1), -1.0, 1.0)
        np.testing.assert_allclose(inner, partial_kernel(spec, m, t), atol=1e-9)


def test_feature_norm_is_partial_norm():
    """|Phi(x)|^2 = kappa_m^2 at every point."""
    points = sample_points(2, 50)
    features = feature_map(SPHERE, 6, points)
    np.testing.assert_allclose(np.sum(features ** 2, axis=1), partial_sum(SPHERE, 6), rtol=1e-10)


def test_feature_map_unsupported_manifold():
    """Feature maps are implemented on S^1 and S^2."""
    spec = KernelSpec(make_manifold(SpaceClass.SPHERE, 3), GeometricModel(1.0, 0.5))
    with pytest.raises(Unsupported):
        feature_map(spec, 2, np.array([[1.0, 0.0, 0.0, 0.0]]))


def test_sample_ball_prefix_and_radius():
    """Draws stay in the unit ball, and a longer run extends a shorter one."""
    long_run = sample_ball(5, 50, 7)
    np.testing.assert_array_equal(long_run[:20], sample_ball(5, 20, 7))
    assert np.all(np.linalg.norm(long_run, axis=1) <= 1.0 + 1e-12)


def test_sample_plan_validation():
    """Plans reject too few points, draws or levels."""
    for kwargs in ({"ambient_points": 8}, {"ball_draws": 10}, {"m": 0}, {"seed": -1}):
        with pytest.raises(DomainError):
            SamplePlan(**kwargs)


def test_sampled_values_obey_reproducing_bound():
    """|g(x)| <= ||c|| kappa_m at every sample point."""
    plan = SamplePlan(ambient_points=64, ball_draws=200, m=5, seed=11)
    values = evaluate_sample(CIRCLE, plan)
    radii = np.linalg.norm(sample_ball(cumulative_dim(S1, 5), 200, 11), axis=1)
    bound = radii * math.sqrt(partial_sum(CIRCLE, 5))
    assert np.all(np.max(np.abs(values), axis=1) <= bound + 1e-9)


@pytest.mark.parametrize("eps", [0.05, 0.1, 0.2, 0.4])
def test_packing_never_exceeds_upper_bound(eps):
    """ln(count) <= the certified upper bound on S^1."""
    plan = default_plan(CIRCLE, eps)
    estimate = packing_lower_estimate(CIRCLE, eps, plan)
    assert isinstance(estimate, PackingEstimate)
    assert 1 <= estimate.count <= plan.ball_draws
    assert math.log(estimate.count) <= upper_bound_lnC(CIRCLE, eps)[0] + 1e-9


def test_packing_on_two_sphere():
    """A small run on S^2 also stays below the upper bound."""
    eps = 0.2
    plan = default_plan(SPHERE, eps, ambient_points=64, ball_draws=200)
    estimate = packing_lower_estimate(SPHERE, eps, plan)
    assert math.log(estimate.count) <= upper_bound_lnC(SPHERE, eps)[0] + 1e-9


def test_packing_is_deterministic():
    """Equal plans give equal counts."""
    plan = SamplePlan(ambient_points=64, ball_draws=300, m=4, seed=5)
    first = packing_lower_estimate(CIRCLE, 0.1, plan)
    assert packing_lower_estimate(CIRCLE, 0.1, plan) == first


def test_packing_trivial_beyond_kappa():
    """With eps >= kappa every draw lies within 2 eps of the first."""
    eps = 1.01 * embedding_norm(CIRCLE)
    plan = default_plan(CIRCLE, eps, ball_draws=300)
    assert packing_lower_estimate(CIRCLE, eps, plan).count == 1


def test_packing_grows_with_more_draws():
    """Extra draws extend the same first-fit scan, so the count cannot drop."""
    small = SamplePlan(ambient_points=64, ball_draws=200, m=4, seed=9)
    large = SamplePlan(ambient_points=64, ball_draws=400, m=4, seed=9)
    assert packing_lower_estimate(CIRCLE, 0.1, large).count >= packing_lower_estimate(CIRCLE, 0.1, small).count


def test_cover_heuristic_at_least_packing():
    """An eps-cover of the sample needs at least as many centers as a 2 eps-packing."""
    plan = SamplePlan(ambient_points=64, ball_draws=300, m=4, seed=2)
    cover = greedy_cover_heuristic(CIRCLE, 0.1, plan)
    assert cover >= packing_lower_estimate(CIRCLE, 0.1, plan).count
    assert cover >= packing_lower_estimate(CIRCLE, 0.05, plan).count


def test_degenerate_kernel():
    """All-zero coefficients up to m leave nothing to sample."""
    spec = KernelSpec(S1, ExplicitModel((0.0, 0.0)))
    with pytest.raises(DegenerateKernel):
        packing_lower_estimate(spec, 0.1, SamplePlan(m=1, ambient_points=32, ball_draws=100))


def test_empirical_rejects_other_manifolds():
    """Only S^1 and S^2 are sampled."""
    spec = KernelSpec(make_manifold(SpaceClass.REAL_PROJECTIVE, 2), GeometricModel(1.0, 0.5))
    with pytest.raises(Unsupported):
        packing_lower_estimate(spec, 0.1, SamplePlan(m=2, ambient_points=32, ball_draws=100))


def test_eps_must_be_positive():
    """eps <= 0 is rejected."""
    with pytest.raises(DomainError):
        packing_lower_estimate(CIRCLE, 0.0, SamplePlan(m=1, ambient_points=32, ball_draws=100))


def test_packing_documented_run():
    """S^1, eps = 0.1, m = 8, 512 points, 2000 draws, seed 42: a non-trivial packing below the bound."""
    plan = SamplePlan(m=8, ambient_points=512, ball_draws=2000, seed=42)
    estimate = packing_lower_estimate(CIRCLE, 0.1, plan)
    assert estimate.count >= 2
    assert math.log(estimate.count) <= upper_bound_lnC(CIRCLE, 0.1)[0]


def test_feature_dimension_limit(monkeypatch):
    """Plans whose dim V_m exceeds the limit are rejected before any feature is built."""
    monkeypatch.setattr("core.empirical.EMPIRICAL_MAX_DIM", 25)
    small = SamplePlan(m=4, ambient_points=32, ball_draws=100)
    large = SamplePlan(m=5, ambient_points=32, ball_draws=100)
    assert feature_dim_fits(SPHERE, small)
    assert not feature_dim_fits(SPHERE, large)
    with pytest.raises(Unsupported):
        evaluate_sample(SPHERE, large)


def test_default_plan_reaches_past_limit_for_slow_decay():
    """A power law at eps = 1e-6 has a cutoff level far beyond the default feature limit."""
    spec = KernelSpec(S2, PowerLawModel(1.0, 3.0))
    assert not feature_dim_fits(spec, default_plan(spec, 1e-6))
