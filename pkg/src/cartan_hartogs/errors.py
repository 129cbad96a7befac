"""Exception types shared across the package."""


class ShapeError(ValueError):
    """An array does not have the shape a routine requires."""


class SymmetryError(ValueError):
    """A matrix violates a required (conjugate-)symmetry beyond tolerance."""


class PositiveDefiniteError(ValueError):
    """A Hermitian matrix that must be positive definite is not."""


class SingularityError(ValueError):
    """A matrix that must be invertible is numerically singular."""


class DomainMembershipError(ValueError):
    """A point lies outside the Cartan-Hartogs domain it is used with."""


class DegenerateDirectionError(ValueError):
    """A tangent direction is identically zero where a direction is required."""


class CoefficientError(ValueError):
    """A Bergman coefficient vector is malformed or yields a nonpositive series."""


class StencilError(RuntimeError):
    """A finite-difference stencil left the domain even after step shrinking."""


class ConditioningError(RuntimeError):
    """A matrix inversion inside a finite-difference formula is too ill-conditioned."""


class ProbeError(RuntimeError):
    """A boundary ray probe could not resolve the boundary approach."""


class FitError(RuntimeError):
    """A coefficient fit did not reach the required residual."""
