"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class NotHermitianError(ValueError):
    """A matrix expected to be Hermitian is not, within tolerance."""


class NotPositiveError(ValueError):
    """A matrix expected to be positive semi-definite has a negative eigenvalue."""


class PredicateError(ValueError):
    """A channel fails a required predicate (trace preservation, unitality, ...)."""


class BiorthogonalityMismatch(RuntimeError):
    """The three equivalent bi-orthogonality tests disagreed."""
