"""Exception types shared across the package."""


class GuardRejected(ValueError):
    """The lowest-two-state truncation is invalid (near-degenerate ε1, ε2)."""


class EigensolverError(RuntimeError):
    """Dense eigensolver failed or returned non-finite output."""


class NonPhysicalState(ValueError):
    """A density matrix or state vector violates its physical invariants."""


class FeatureNotFound(LookupError):
    """No crossing / minimum bracketed inside the scanned range."""


class DegeneracyWarning(UserWarning):
    """A result depends on an arbitrary basis choice inside a degenerate subspace."""
