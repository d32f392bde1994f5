"""Exception types shared across the library."""


class AttbasinError(Exception):
    """Base class for all library errors."""


class NotSkew(AttbasinError):
    """Matrix passed to vee() is not skew-symmetric within tolerance."""


class BadGains(AttbasinError):
    """Weight matrix is not diagonal with positive entries."""


class NoConvergence(AttbasinError):
    """Eigenvalue iteration failed to converge."""


class AmbiguousMode(AttbasinError):
    """An eigenvalue sits on the stability boundary after restriction."""


class EmptySubspace(AttbasinError):
    """Requested subspace contains no modes."""


class RankDeficient(AttbasinError):
    """Constraint matrix does not have the expected rank."""


class StepTooLarge(AttbasinError):
    """Discrete update left the admissible region for the current step size."""


class NewtonDiverged(AttbasinError):
    """Newton iteration for the relative rotation did not converge."""


class BadRadius(AttbasinError):
    """Seed-ball radius outside the supported range."""


class TimeNotStored(AttbasinError):
    """Requested time is not on the stored trajectory grid."""
