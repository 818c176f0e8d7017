"""Exception hierarchy for the covering-number toolkit.

Every failure raised by core/ derives from CoveringError, so callers can catch
one base class. The CLI maps SchemaError to exit status 2 and every other
CoveringError to exit status 3.
"""

from __future__ import annotations


class CoveringError(Exception):
    """Base class for all errors raised by the toolkit."""


class DomainError(CoveringError, ValueError):
    """An argument lies outside the domain of a formula."""


class InvalidDimension(DomainError):
    """The dimension is not admissible for the requested space class."""


class SpectralOverflow(CoveringError):
    """An exact spectral integer exceeds the configured ceiling."""


class ModelMismatch(CoveringError):
    """The coefficient model is not defined on the given manifold."""


class NotSummable(CoveringError):
    """Summability of the coefficient sequence could not be certified."""


class Unsupported(CoveringError):
    """The operation is not available for this model or dimension."""


class ZeroCoefficient(CoveringError):
    """A coefficient required to be positive vanishes."""


class QuadratureFailure(CoveringError):
    """The quadrature error estimate exceeds the requested tolerance."""


class LevelOverflow(CoveringError):
    """A truncation level search ran past the configured ceiling."""


class HypothesisNotCertified(CoveringError):
    """The coefficients do not satisfy a theorem's hypothesis."""


class DegenerateKernel(CoveringError):
    """All coefficients up to the truncation level vanish."""


class SchemaError(CoveringError):
    """Input data does not match the expected schema.

    Attributes:
    - field: dotted path of the offending field (e.g. "model.ratio").
    """

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field
