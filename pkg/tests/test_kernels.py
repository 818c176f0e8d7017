"""Tests for core.kernels.

Coefficient models, the Gaussian eigenvalues, embedding norms and tails,
kernel evaluation and coefficient recovery by quadrature.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.errors import (
    DomainError,
    ModelMismatch,
    SchemaError,
    Unsupported,
    ZeroCoefficient,
)
from core.kernels import (
    ExplicitModel,
    GaussianSphereModel,
    GaussianTypeModel,
    GeometricModel,
    KernelSpec,
    PowerLawModel,
    coefficient,
    coefficient_array,
    decay_ratio_range,
    embedding_norm,
    gaussian_coefficient,
    gaussian_kernel_closed_form,
    gaussian_log_coefficient,
    geometric_envelope,
    kernel_eval,
    partial_kernel,
    partial_norm,
    partial_sum,
    recover_coefficient,
    tail_bound,
    tail_norm,
    tail_sum,
    total_sum,
    truncation_level,
)
from core.manifold import SpaceClass, make_manifold

S1 = make_manifold(SpaceClass.SPHERE, 1)
S2 = make_manifold(SpaceClass.SPHERE, 2)
S3 = make_manifold(SpaceClass.SPHERE, 3)
RP2 = make_manifold(SpaceClass.REAL_PROJECTIVE, 2)
CP4 = make_manifold(SpaceClass.COMPLEX_PROJECTIVE, 4)


def _kernel(manifold, model) -> KernelSpec:
    """Shorthand for KernelSpec(manifold, model)."""
    return KernelSpec(manifold=manifold, model=model)


SUMMABLE_KERNELS = [
    _kernel(S2, GeometricModel(1.0, 0.5)),
    _kernel(S1, GeometricModel(2.0, 0.3)),
    _kernel(RP2, GeometricModel(1.0, 0.5)),
    _kernel(CP4, GeometricModel(1.0, 0.7)),
    _kernel(S2, PowerLawModel(1.0, 3.0, 1.0)),
    _kernel(RP2, PowerLawModel(2.0, 4.0, 0.5)),
    _kernel(S2, GaussianSphereModel(2.0)),
    _kernel(S3, GaussianSphereModel(1.0)),
    _kernel(S2, GaussianTypeModel(0.1)),
    _kernel(S1, GaussianTypeModel(0.3)),
    _kernel(S2, ExplicitModel((1.0, 0.5, 0.25))),
]


@pytest.mark.parametrize(
    "spec, k, expected",
    [
        (_kernel(S2, GeometricModel(1.0, 0.5)), 6, 0.015625),
        (_kernel(S2, GaussianTypeModel(0.1)), 2, 0.05),
        (_kernel(S2, PowerLawModel(1.0, 3.0, 1.0)), 0, 1.0),
        (_kernel(S2, PowerLawModel(2.0, 3.0, 1.0)), 2, 0.25),
        (_kernel(RP2, GeometricModel(1.0, 0.5)), 3, 0.0),
        (_kernel(S2, ExplicitModel((1.0, 0.5))), 5, 0.0),
    ],
)
def test_coefficient_examples(spec, k, expected):
    """Coefficients follow the closed form of each model."""
    assert coefficient(spec, k) == pytest.approx(expected, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("spec", SUMMABLE_KERNELS)
def test_coefficient_array_matches_scalar(spec):
    """The vectorized coefficients agree with coefficient(spec, k)."""
    values = coefficient_array(spec, 12)
    expected = [coefficient(spec, k) for k in range(13)]
    np.testing.assert_allclose(values, expected, rtol=1e-12, atol=0.0)


def test_gaussian_lambda_zero():
    """lambda_0 on S^2 with rho = sqrt 2 is e^-1 sinh 1."""
    assert gaussian_coefficient(math.sqrt(2.0), 2, 0) == pytest.approx(
        math.exp(-1.0) * math.sinh(1.0), rel=1e-9
    )
    assert gaussian_coefficient(math.sqrt(2.0), 2, 0) == pytest.approx(0.432332, abs=1e-6)


def test_gaussian_lambda_zero_three_sphere():
    """lambda_0 on S^3 with rho = 1 is e^-2 I_1(2)."""
    assert gaussian_coefficient(1.0, 3, 0) == pytest.approx(0.215270, abs=1e-6)


def test_gaussian_needs_two_dimensions():
    """The Gaussian eigenvalue formula is stated for d >= 2."""
    with pytest.raises(DomainError):
        gaussian_coefficient(1.0, 1, 0)


@pytest.mark.parametrize("rho", [1.0, math.sqrt(2.0), 2.0, 3.0])
@pytest.mark.parametrize("d", [2, 3])
def test_gaussian_eigenvalue_ratio(rho, d):
    """rho^2 (k + (d+1)/2) lambda_{k+1} < lambda_k."""
    for k in range(41):
        left = 2.0 * math.log(rho) + math.log(k + (d + 1) / 2) + gaussian_log_coefficient(rho, d, k + 1)
        assert left < gaussian_log_coefficient(rho, d, k)


@pytest.mark.parametrize("rho", [1.0, math.sqrt(2.0), 2.0, 3.0])
@pytest.mark.parametrize("d", [2, 3])
def test_gaussian_coefficient_ratio(rho, d):
    """a_{k+1} < (2/rho^2) (k+d-1) / ((2k+d-1)(k+1)) a_k."""
    spec = _kernel(make_manifold(SpaceClass.SPHERE, d), GaussianSphereModel(rho))
    for k in range(41):
        bound = 2.0 / rho ** 2 * (k + d - 1) / ((2 * k + d - 1) * (k + 1))
        assert coefficient(spec, k + 1) < bound * coefficient(spec, k)


@pytest.mark.parametrize("rho", [0.8, 1.5, 3.0])
def test_gaussian_coefficients_sum_to_one(rho):
    """K(x, x) = 1 for the Gaussian kernel, so sum a_k = 1."""
    spec = _kernel(S2, GaussianSphereModel(rho))
    assert math.fsum(coefficient_array(spec, 80)) == pytest.approx(1.0, abs=1e-12)
    assert total_sum(spec) == 1.0


@pytest.mark.parametrize(
    "spec, expected",
    [
        (_kernel(S2, GeometricModel(1.0, 0.5)), math.sqrt(2.0)),
        (_kernel(S2, ExplicitModel((1.0,))), 1.0),
        (_kernel(S2, GaussianTypeModel(0.1)), 1.165343),
        (_kernel(S2, GaussianSphereModel(2.0)), 1.0),
        (_kernel(RP2, GeometricModel(1.0, 0.5)), math.sqrt(4.0 / 3.0)),
    ],
)
def test_embedding_norm(spec, expected):
    """kappa = sqrt(sum a_k) in closed form."""
    assert embedding_norm(spec) == pytest.approx(expected, abs=1e-6)


def test_partial_and_tail_norms():
    """kappa_7 = sqrt(2 - 2^-7) = 1.4114487 for the geometric kernel, and the tail of a two-term list."""
    geometric = _kernel(S2, GeometricModel(1.0, 0.5))
    assert partial_norm(geometric, 7) == pytest.approx(math.sqrt(2.0 - 2.0 ** -7), rel=1e-12)
    assert partial_norm(geometric, 7) == pytest.approx(1.4114487, abs=1e-7)
    explicit = _kernel(S2, ExplicitModel((1.0, 0.5)))
    assert tail_norm(explicit, 0) == pytest.approx(math.sqrt(0.5), rel=1e-12)
    assert tail_norm(explicit, 1) == 0.0


@settings(max_examples=60, deadline=None)
@given(spec=st.sampled_from(SUMMABLE_KERNELS), m=st.integers(min_value=0, max_value=100))
def test_parseval_split(spec, m):
    """kappa_m^2 + (kappa_m^s)^2 = kappa^2."""
    total = total_sum(spec)
    assert partial_sum(spec, m) + tail_sum(spec, m) == pytest.approx(total, rel=1e-10)


@pytest.mark.parametrize("spec", SUMMABLE_KERNELS)
def test_tails_are_nonincreasing(spec):
    """The tail sum never grows with m."""
    tails = [tail_sum(spec, m) for m in range(40)]
    assert all(later <= earlier * (1 + 1e-12) for earlier, later in zip(tails, tails[1:]))


def test_power_law_tail_uses_hurwitz_zeta():
    """sum_{k > 9} k^-3 = zeta(3, 10)."""
    spec = _kernel(S2, PowerLawModel(1.0, 3.0, 1.0))
    assert tail_sum(spec, 9) == pytest.approx(0.005525, abs=1e-6)


@pytest.mark.parametrize(
    "spec, m, expected",
    [
        (_kernel(S2, GeometricModel(1.0, 0.5)), 6, 0.015625),
        (_kernel(S2, PowerLawModel(1.0, 3.0, 1.0)), 9, 0.006),
        (_kernel(S2, GaussianTypeModel(0.1)), 3, 0.5 ** 4 / 0.5),
    ],
)
def test_tail_bound_examples(spec, m, expected):
    """Closed-form tail bounds."""
    assert tail_bound(spec, m) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize(
    "spec",
    [
        _kernel(S2, GeometricModel(1.0, 0.5)),
        _kernel(RP2, GeometricModel(1.0, 0.5)),
        _kernel(S2, PowerLawModel(1.0, 3.0, 1.0)),
        _kernel(RP2, PowerLawModel(2.0, 4.0, 0.5)),
        _kernel(S2, GaussianSphereModel(2.0)),
        _kernel(S2, GaussianTypeModel(0.1)),
        _kernel(S1, GaussianTypeModel(0.3)),
    ],
)
def test_tail_bound_dominates_tail(spec):
    """tail_bound(m) >= tail_sum(m) for every m."""
    for m in range(51):
        assert tail_bound(spec, m) >= tail_sum(spec, m) * (1 - 1e-12)


@pytest.mark.parametrize(
    "spec",
    [_kernel(S2, ExplicitModel((1.0, 0.5))), _kernel(S2, GaussianSphereModel(1.0)), _kernel(S2, GaussianTypeModel(0.3))],
)
def test_tail_bound_unsupported(spec):
    """Explicit lists and models without a certified envelope have no tail bound."""
    with pytest.raises(Unsupported):
        tail_bound(spec, 3)


def test_geometric_envelope_threshold():
    """The Gaussian envelope needs rho > sqrt 2."""
    assert geometric_envelope(_kernel(S2, GaussianSphereModel(math.sqrt(2.0)))) is None
    a0, theta = geometric_envelope(_kernel(S2, GaussianSphereModel(2.0)))
    assert theta == pytest.approx(0.5)
    assert a0 == pytest.approx(coefficient(_kernel(S2, GaussianSphereModel(2.0)), 0))


@pytest.mark.parametrize(
    "spec, low, high",
    [
        (_kernel(S2, GeometricModel(1.0, 0.5)), 0.5, 0.5),
        (_kernel(S1, GaussianTypeModel(0.3)), 0.3, 0.6),
        (_kernel(RP2, GeometricModel(1.0, 0.5)), 0.25, 0.25),
    ],
)
def test_decay_ratio_range_exact(spec, low, high):
    """Consecutive coefficient ratios of closed-form models."""
    assert decay_ratio_range(spec, 30) == pytest.approx((low, high), rel=1e-12)


def test_decay_ratio_range_gaussian_type_bracket():
    """For delta^k tau_k on S^2 the ratios lie in [delta, 3 delta]."""
    low, high = decay_ratio_range(_kernel(S2, GaussianTypeModel(0.1)), 50)
    assert 0.1 <= low <= high <= 0.3 + 1e-12
    assert high == pytest.approx(0.3)


def test_decay_ratio_range_zero_coefficient():
    """A vanishing coefficient on an existing level is reported."""
    with pytest.raises(ZeroCoefficient):
        decay_ratio_range(_kernel(S2, ExplicitModel((1.0, 0.0, 1.0))), 10)


def test_truncation_level_is_least():
    """The level found is the least one whose tail meets the target."""
    spec = _kernel(S2, PowerLawModel(1.0, 3.0, 1.0))
    for target in (1e-2, 1e-4, 1e-7):
        m = truncation_level(spec, target)
        assert tail_sum(spec, m) <= target
        assert m == 0 or tail_sum(spec, m - 1) > target


def test_kernel_eval_at_one_is_kappa_squared():
    """K(x, x) = kappa^2."""
    for spec in SUMMABLE_KERNELS:
        assert kernel_eval(spec, 1.0) == pytest.approx(total_sum(spec), abs=1e-10)


def test_kernel_eval_geometric_circle():
    """sum 2^-k cos(k pi) = 1/(1 + 1/2) = 2/3."""
    spec = _kernel(S1, GeometricModel(1.0, 0.5))
    assert kernel_eval(spec, -1.0) == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_kernel_eval_constant_kernel():
    """A single coefficient a_0 = 1 gives K = 1 everywhere."""
    spec = _kernel(S2, ExplicitModel((1.0,)))
    np.testing.assert_allclose(kernel_eval(spec, np.linspace(-1.0, 1.0, 7)), 1.0)


@pytest.mark.parametrize("rho", [0.8, 1.0, 2.0])
@pytest.mark.parametrize("d", [2, 3])
def test_gaussian_series_matches_closed_form(rho, d):
    """The Jacobi series of the Gaussian kernel reproduces exp(-2 rho^-2 (1-t))."""
    spec = _kernel(make_manifold(SpaceClass.SPHERE, d), GaussianSphereModel(rho))
    t = np.linspace(-1.0, 1.0, 41)
    np.testing.assert_allclose(kernel_eval(spec, t), gaussian_kernel_closed_form(rho, t), atol=1e-10)


def test_kernel_eval_agrees_with_longer_partial_sum():
    """Truncation at the tolerance matches a ten times longer partial sum."""
    spec = _kernel(S2, GaussianTypeModel(0.1))
    t = np.linspace(-1.0, 1.0, 21)
    m = truncation_level(spec, 1e-12)
    np.testing.assert_allclose(kernel_eval(spec, t), partial_kernel(spec, 10 * m, t), atol=1e-12)


@pytest.mark.parametrize(
    "spec, k, expected",
    [
        (_kernel(S2, GeometricModel(1.0, 0.5)), 3, 0.125),
        (_kernel(S2, ExplicitModel((1.0,))), 1, 0.0),
        (_kernel(S1, GeometricModel(1.0, 0.5)), 0, 1.0),
    ],
)
def test_recover_coefficient_examples(spec, k, expected):
    """Quadrature against P_k recovers a_k."""
    assert recover_coefficient(spec, k) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize(
    "spec",
    [
        _kernel(S1, GeometricModel(1.0, 0.5)),
        _kernel(S2, GeometricModel(1.0, 0.5)),
        _kernel(S2, GaussianTypeModel(0.5)),
        _kernel(CP4, GeometricModel(1.0, 0.5)),
    ],
)
def test_recover_coefficient_round_trip(spec):
    """Recovered coefficients match the model within 1e-6 (relative) for k <= 20."""
    for k in range(21):
        assert recover_coefficient(spec, k) == pytest.approx(coefficient(spec, k), rel=1e-6, abs=1e-12)


def test_recover_coefficient_needs_enough_nodes():
    """Fewer than 64 nodes are rejected."""
    with pytest.raises(DomainError):
        recover_coefficient(_kernel(S2, GeometricModel(1.0, 0.5)), 1, quadrature_nodes=32)


def test_gaussian_models_only_on_spheres():
    """Gaussian models off the sphere, or GaussianSphere on S^1, are rejected."""
    with pytest.raises(ModelMismatch):
        _kernel(CP4, GaussianTypeModel(0.1))
    with pytest.raises(ModelMismatch):
        _kernel(S1, GaussianSphereModel(2.0))


def test_round_trip_through_dict():
    """as_dict/from_dict preserve every model."""
    for spec in SUMMABLE_KERNELS:
        assert KernelSpec.from_dict(spec.as_dict()) == spec


@pytest.mark.parametrize(
    "document, field",
    [
        ({"manifold": {"class": "sphere", "d": 2}, "model": {"type": "geometric", "ratio": 1.5}}, "model.ratio"),
        ({"manifold": {"class": "sphere", "d": 2}, "model": {"type": "geometric", "ratio": "x"}}, "model.ratio"),
        ({"manifold": {"class": "sphere", "d": 2}, "model": {"type": "power_law", "c": 1, "p": 1}}, "model.p"),
        ({"manifold": {"class": "sphere", "d": 2}, "model": {"type": "wavelet"}}, "model.type"),
        ({"manifold": {"class": "sphere", "d": 2}, "model": {"type": "explicit", "coefficients": []}}, "model.coefficients"),
        ({"manifold": {"class": "sphere", "d": 2}, "model": {"type": "explicit", "coefficients": [1, -1]}}, "model.coefficients[1]"),
        ({"manifold": {"class": "complex_projective", "d": 4}, "model": {"type": "gaussian_type", "delta": 0.1}}, "model.type"),
        ({"manifold": {"class": "sphere", "d": 2}}, "model"),
        ([1, 2], "<root>"),
    ],
)
def test_from_dict_names_the_bad_field(document, field):
    """SchemaError carries the offending field path."""
    with pytest.raises(SchemaError) as info:
        KernelSpec.from_dict(document)
    assert info.value.field == field


def test_recover_circle_coefficients_at_high_levels():
    """On S^1 the endpoint-singular weight still gives a_k to 1e-7 relative up to k = 20."""
    spec = _kernel(S1, GeometricModel(1.0, 0.5))
    for k in (10, 15, 20):
        assert recover_coefficient(spec, k) == pytest.approx(coefficient(spec, k), rel=1e-7)
