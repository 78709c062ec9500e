"""Exception hierarchy shared across the package."""


class NetEntropyError(Exception):
    """Base class for all errors raised by netentropy."""


class InvalidArgumentError(NetEntropyError, ValueError):
    pass


class InvalidDistributionError(NetEntropyError, ValueError):
    pass


class InvalidDensityMatrixError(NetEntropyError, ValueError):
    pass


class DegenerateInputError(NetEntropyError, ValueError):
    pass


class NumericalFailureError(NetEntropyError, RuntimeError):
    pass


class GraphConstructionError(NetEntropyError, RuntimeError):
    """Raised when connectivity construction leaves a site isolated."""


class InvalidConfigError(NetEntropyError, ValueError):
    pass
