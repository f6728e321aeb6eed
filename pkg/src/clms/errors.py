"""Exception taxonomy for the clms package.

Every error raised on purpose by this package derives from :class:`ClmsError`,
so callers can catch one base class at API boundaries. The CLI maps subclasses
to exit codes (configuration 1, instability 2, ensemble failure 3).
"""


class ClmsError(Exception):
    """Base class for all errors raised by the clms package."""


class ArgumentError(ClmsError):
    """An argument violates a documented precondition (bad sizes, counts, signs)."""


class ShapeError(ClmsError):
    """Array input has the wrong dimensionality or incompatible dimensions."""


class SymmetryError(ClmsError):
    """A matrix required to be symmetric is not, beyond tolerance."""


class DefinitenessError(ClmsError):
    """A matrix required to be positive-definite has a non-positive pivot."""


class SingularMatrixError(ClmsError):
    """Linear system matrix is singular or too ill-conditioned to solve."""


class SpecValidationError(ClmsError):
    """A system specification violates one or more of its invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid system spec: {lines}")


class DataError(ClmsError):
    """Sample data contains non-finite values."""


class InstabilityError(ClmsError):
    """Step-size outside the mean-square stable range for the requested quantity."""


class ValidityDomainError(ClmsError):
    """Closed-form expression evaluated outside its own validity domain."""


class ConfigError(ClmsError):
    """Experiment configuration is malformed or violates an invariant."""


class EnsembleError(ClmsError):
    """Monte Carlo ensemble produced no usable runs."""
