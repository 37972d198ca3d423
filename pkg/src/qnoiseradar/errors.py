"""Exception types raised across the package."""


class DomainError(ValueError):
    """A parameter lies outside the domain of the operation."""


class ValidityError(ValueError):
    """A covariance matrix does not describe a physical Gaussian state."""


class InfeasibleError(ValueError):
    """The equal-power constraint cannot be met with N0 > N1."""


class StructureError(ValueError):
    """A correlation matrix is not of the kappa * D block form."""


class DegenerateStateError(ValueError):
    """A quadrature has zero variance."""


class RegimeError(ValueError):
    """A first-order approximation is used outside its region of validity."""


class SupportError(ValueError):
    """The reference state is (numerically) pure, relative entropy diverges.

    The ``value`` attribute carries ``+inf`` as a sentinel.
    """

    value = float("inf")


class TruncationError(ValueError):
    """A Fock cutoff leaves more population in the tail than allowed."""
