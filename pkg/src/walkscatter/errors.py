"""Exception hierarchy shared by all walkscatter modules."""


class WalkScatterError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(WalkScatterError):
    pass


class NumericalError(WalkScatterError):
    """Raised when a numerical route cannot deliver a trustworthy answer."""


class InvalidTransfer(WalkScatterError, ValueError):
    pass


class InvalidCoin(WalkScatterError, ValueError):
    pass


class DegenerateCoin(InvalidCoin):
    """Diagonal entry too small: perfect reflection is excluded from the coin set."""


class DimensionMismatch(WalkScatterError, ValueError):
    pass


class SingularSystem(NumericalError):
    pass


class EigensolverFailure(NumericalError):
    pass


class NonConsecutivePath(WalkScatterError, ValueError):
    pass


class EnumerationCapExceeded(WalkScatterError, ValueError):
    pass


class SlowConvergence(NumericalError):
    pass


class TangentTurningPoint(NumericalError):
    pass


class StepUnderflow(NumericalError):
    pass


class TruncationTooSmall(NumericalError):
    pass


class DependentPair(NumericalError):
    pass


class QuadratureFailure(NumericalError):
    pass


class BranchCut(WalkScatterError, ValueError):
    pass
