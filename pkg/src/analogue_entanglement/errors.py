"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the physical domain (e.g. a nonpositive frequency)."""


class NotSymplecticError(ValueError):
    pass


class UnphysicalStateError(ValueError):
    """Covariance matrix violates the uncertainty relation Gamma + i Omega >= 0."""


class InvalidCoefficientsError(ValueError):
    """Bogoliubov coefficients violate |alpha|^2 - |beta|^2 = 1."""


class SingleModeSqueezingError(ValueError):
    pass


class NotResonantError(ValueError):
    pass


class TruncationLeakageError(RuntimeError):
    """Too much population reached the top of the truncated Fock space."""

    def __init__(self, leakage, bound, message=None):
        self.leakage = leakage
        self.bound = bound
        super().__init__(
            message or f"truncation leakage {leakage:.3e} exceeds bound {bound:.1e}"
        )
