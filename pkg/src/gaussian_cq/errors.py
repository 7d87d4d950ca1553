"""Exception types raised by the toolkit."""


class DimensionMismatch(ValueError):
    pass


class DegenerateForm(ValueError):
    """A skew form that should be nondegenerate is (numerically) singular."""


class PairingError(ValueError):
    """Eigenvalues of the form-scaled covariance do not come in +-i*nu pairs."""


class NotIsotropic(ValueError):
    pass


class RankDeficient(ValueError):
    pass


class UncertaintyViolation(ValueError):
    """Covariance violates alpha + (i/2) Delta >= 0."""


class NoiseViolation(ValueError):
    """Channel noise violates alpha >= +-(i/2)(Delta_B - K^t Delta_A K)."""


class NotClassicalQuantum(ValueError):
    pass


class NoiseNotState(ValueError):
    pass


class NonPositiveKn(ValueError):
    pass


class NonConvergence(RuntimeError):
    def __init__(self, message, *, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
