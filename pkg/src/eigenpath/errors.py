"""Exception and warning types shared across the package."""


class EigenpathError(Exception):
    """Base class for all package-specific failures."""


class NonEquilibriumOrigin(EigenpathError):
    """The vector field does not vanish at the origin."""


class StepSizeUnderflow(EigenpathError):
    """Adaptive step controller shrank below the hard floor (stiffness or blow-up)."""


class StateOverflow(EigenpathError):
    """Trajectory norm exceeded the configured cap, or became non-finite."""


class NonBracketedEvent(EigenpathError):
    """Radius event cannot bracket a crossing from the given initial state."""


class DefectiveMatrix(EigenpathError):
    """Eigenvector basis is numerically rank-deficient; no well-defined left eigenvectors."""


class NotHurwitz(EigenpathError):
    """Spectral-distribution check requires all eigenvalues in the open left half plane."""


class NoConvergence(EigenpathError):
    """Infinite-horizon quadrature did not meet the window criterion before t_max."""


class SpectralConditionViolated(EigenpathError):
    """Sufficient condition for the boundary term to vanish does not hold (overridable)."""


class BoundaryNotReached(EigenpathError):
    """Trajectory failed to reach the boundary set before t_max."""


class RejectionStall(EigenpathError):
    """Rejection sampler acceptance rate fell below the stall threshold."""


class NoMatchingEigenvalue(EigenpathError):
    """No fitted eigenvalue lies within the matching tolerance of the target."""


class ZeroEigenvalue(EigenpathError):
    """Discrete eigenvalue 0 has no continuous-time counterpart."""


class InvalidRatio(EigenpathError):
    """Sharpness selection received a non-positive residual scale."""


class NoSignChange(EigenpathError):
    """Level-set bracket has the same sign at both ends."""


class RankDeficientWarning(UserWarning):
    """Least-squares fit retained fewer than half of the dictionary directions."""


class SnapshotCountWarning(UserWarning):
    """Fewer snapshot pairs than dictionary functions; fit is underdetermined."""


class AssumptionNotCheckedWarning(UserWarning):
    """Spurious-equilibrium scan was skipped before a zero-boundary computation."""
