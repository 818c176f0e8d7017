"""Compact two-point homogeneous spaces and their spectral data.

A space is identified by its class and real dimension d. The Jacobi pair is
alpha = (d - 2)/2 and beta from the class table:

- sphere, real projective: beta = alpha
- complex projective: beta = 0
- quaternion projective: beta = 1
- Cayley plane (d = 16 only): beta = 3

Eigenspace dimensions are computed exactly. Every Gamma ratio that appears in
tau_k and dim V_m has an integer shift between its arguments for admissible
(alpha, beta), so it reduces to a short product of rationals.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterator, Optional, Tuple

from config import INT_LIMIT
from .errors import InvalidDimension, SchemaError, SpectralOverflow
from .specfun import ln_gamma

logger = logging.getLogger(__name__)


class SpaceClass(str, Enum):
    """The five classes of compact two-point homogeneous spaces."""

    SPHERE = "sphere"
    REAL_PROJECTIVE = "real_projective"
    COMPLEX_PROJECTIVE = "complex_projective"
    QUATERNION_PROJECTIVE = "quaternion_projective"
    CAYLEY = "cayley"


_LABELS = {
    SpaceClass.SPHERE: "S^{d}",
    SpaceClass.REAL_PROJECTIVE: "P^{d}(R)",
    SpaceClass.COMPLEX_PROJECTIVE: "P^{d}(C)",
    SpaceClass.QUATERNION_PROJECTIVE: "P^{d}(H)",
    SpaceClass.CAYLEY: "P^{d}",
}


@dataclass(frozen=True)
class ManifoldSpec:
    """A space class with its real dimension and Jacobi pair.

    Attributes:
    - space_class: one of the five SpaceClass members.
    - d: real dimension of the manifold.
    - alpha: (d - 2)/2.
    - beta: per the class table in the module docstring.
    """

    space_class: SpaceClass
    d: int
    alpha: float
    beta: float

    @property
    def label(self) -> str:
        """Short human-readable name, e.g. "S^2" or "P^16"."""
        return _LABELS[self.space_class].format(d=self.d)

    @property
    def has_odd_levels(self) -> bool:
        """False for real projective spaces, whose odd eigenspaces vanish."""
        return self.space_class is not SpaceClass.REAL_PROJECTIVE

    def as_dict(self) -> Dict[str, Any]:
        """Serialize to the KernelSpec JSON "manifold" object."""
        return {"class": self.space_class.value, "d": self.d}

    @staticmethod
    def from_dict(dictionary: Dict[str, Any], field: str = "manifold") -> ManifoldSpec:
        """Build a ManifoldSpec from its JSON object, raising SchemaError on bad input."""
        if not isinstance(dictionary, dict):
            raise SchemaError(field, "expected an object")
        space_class = parse_space_class(dictionary.get("class"), f"{field}.class")
        d = dictionary.get("d")
        if isinstance(d, bool) or not isinstance(d, int):
            raise SchemaError(f"{field}.d", "expected an integer")
        try:
            return make_manifold(space_class, d)
        except InvalidDimension as e:
            raise SchemaError(f"{field}.d", str(e)) from e


def parse_space_class(name: Any, field: str = "class") -> SpaceClass:
    """Map a JSON class name onto a SpaceClass member."""
    try:
        return SpaceClass(name)
    except ValueError:
        allowed = "|".join(member.value for member in SpaceClass)
        raise SchemaError(field, f"expected one of {allowed}, got {name!r}") from None


def make_manifold(space_class: SpaceClass, d: int) -> ManifoldSpec:
    """Return the ManifoldSpec for a class and real dimension.

    Raises:
    - InvalidDimension: if d is not admissible for the class.
    """
    space_class = SpaceClass(space_class)
    if space_class in (SpaceClass.SPHERE, SpaceClass.REAL_PROJECTIVE):
        admissible = d >= 1
    elif space_class is SpaceClass.COMPLEX_PROJECTIVE:
        admissible = d >= 4 and d % 2 == 0
    elif space_class is SpaceClass.QUATERNION_PROJECTIVE:
        admissible = d >= 8 and d % 4 == 0
    else:
        admissible = d == 16
    if not admissible:
        raise InvalidDimension(f"d={d} is not admissible for {space_class.value}")

    alpha = (d - 2) / 2
    beta = {
        SpaceClass.SPHERE: alpha,
        SpaceClass.REAL_PROJECTIVE: alpha,
        SpaceClass.COMPLEX_PROJECTIVE: 0.0,
        SpaceClass.QUATERNION_PROJECTIVE: 1.0,
        SpaceClass.CAYLEY: 3.0,
    }[space_class]
    return ManifoldSpec(space_class=space_class, d=d, alpha=alpha, beta=beta)


def _gamma_shift(x: Fraction, n: int) -> Fraction:
    """Gamma(x + n) / Gamma(x) for an integer shift n, as an exact rational."""
    if n >= 0:
        return math.prod((x + j for j in range(n)), start=Fraction(1))
    return 1 / math.prod((x + n + j for j in range(-n)), start=Fraction(1))


def _exact_pair(spec: ManifoldSpec) -> Tuple[Fraction, Fraction, int, int]:
    """(alpha, beta, alpha - beta, alpha + beta) with the two shifts as ints."""
    alpha, beta = Fraction(spec.alpha), Fraction(spec.beta)
    return alpha, beta, int(alpha - beta), int(alpha + beta)


def _normalizer(spec: ManifoldSpec) -> Fraction:
    """Gamma(beta+1) / (Gamma(alpha+1) Gamma(alpha+beta+2))."""
    _, beta, shift, total = _exact_pair(spec)
    return 1 / (_gamma_shift(beta + 1, shift) * math.factorial(total + 1))


def _check_limit(value: int, limit: Optional[int], what: str) -> int:
    if limit is not None and value > limit:
        raise SpectralOverflow(f"{what} = {value} exceeds the limit {limit}")
    return value


def _as_int(value: Fraction) -> int:
    if value.denominator != 1:
        raise ArithmeticError(f"expected an integer, got {value}")
    return value.numerator


def _tau_exact(spec: ManifoldSpec, k: int) -> int:
    if k == 0:
        return 1
    if not spec.has_odd_levels and k % 2 == 1:
        return 0
    _, beta, shift, total = _exact_pair(spec)
    value = (
        (2 * k + total + 1)
        * _gamma_shift(k + beta + 1, shift)
        * _gamma_shift(Fraction(k + 1), total)
        * _normalizer(spec)
    )
    return _as_int(value)


def eigenspace_dim(spec: ManifoldSpec, k: int, limit: Optional[int] = INT_LIMIT) -> int:
    """Return tau_k, the dimension of the k-th eigenspace, exactly.

    Parameters:
    - spec: the manifold.
    - k: level, k >= 0.
    - limit: ceiling for the result; None disables the check.

    Raises:
    - SpectralOverflow: if tau_k exceeds limit.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    return _check_limit(_tau_exact(spec, k), limit, f"tau_{k}")


def iter_eigenspace_dims(
        spec: ManifoldSpec, m_max: Optional[int] = None, limit: Optional[int] = INT_LIMIT
) -> Iterator[Tuple[int, int]]:
    """Yield (k, tau_k) for k = 0, 1, ..., m_max (unbounded when m_max is None)."""
    k = 0
    while m_max is None or k <= m_max:
        yield k, eigenspace_dim(spec, k, limit)
        k += 1


def cumulative_dim(spec: ManifoldSpec, m: int, limit: Optional[int] = INT_LIMIT) -> int:
    """Return dim V_m = sum of tau_k for k <= m, exactly.

    Real projective spaces are summed level by level, since the closed form
    does not know about the vanishing odd levels. Every other class uses the
    closed product form.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if not spec.has_odd_levels:
        total = sum(_tau_exact(spec, k) for k in range(0, m + 1, 2))
        return _check_limit(total, limit, f"dim V_{m}")

    alpha, beta, shift, total_shift = _exact_pair(spec)
    value = (
        Fraction(m + 1)
        * (m + beta + 1)
        / (alpha + 1)
        * _gamma_shift(m + beta + 2, shift)
        * _gamma_shift(Fraction(m + 2), total_shift)
        * _normalizer(spec)
    )
    return _check_limit(_as_int(value), limit, f"dim V_{m}")


def dim_growth_constant(spec: ManifoldSpec) -> float:
    """Gamma(beta+1) / (Gamma(alpha+2) Gamma(alpha+beta+2)), the m^d coefficient of dim V_m."""
    return math.exp(
        ln_gamma(spec.beta + 1)
        - ln_gamma(spec.alpha + 2)
        - ln_gamma(spec.alpha + spec.beta + 2)
    )


def tau_growth_constant(spec: ManifoldSpec) -> float:
    """2 Gamma(beta+1) / (Gamma(alpha+1) Gamma(alpha+beta+2)), the k^(d-1) coefficient of tau_k."""
    return 2.0 * math.exp(
        ln_gamma(spec.beta + 1)
        - ln_gamma(spec.alpha + 1)
        - ln_gamma(spec.alpha + spec.beta + 2)
    )
