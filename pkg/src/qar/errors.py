"""Exception and warning types raised across the package."""


class QARError(Exception):
    """Base class for all errors raised by :mod:`qar`."""


class ParameterError(QARError, ValueError):
    pass


class NonPositiveParameter(ParameterError):
    pass


class TemperatureOrderViolation(ParameterError):
    pass


class DegenerateSpectrum(ParameterError):
    """Two eigenvalues (or two transition frequencies of one bath) coincide.

    The secular construction of the jump operators needs distinct Bohr
    frequencies per bath, so such parameter sets are rejected.
    """


class ZeroFrequency(ParameterError):
    pass


class OutOfDomain(QARError, ValueError):
    pass


class DegenerateKernel(QARError):
    """The generator has more than one stationary state."""


class NoConvergence(QARError):
    pass


class StepTooLarge(QARError, ValueError):
    pass


class NotStationary(QARError):
    pass


class ZeroWorkCurrent(QARError):
    pass


class EmptySubspace(QARError):
    pass


class OptimizerStall(QARError):
    pass


class NoCoolingRegion(QARError):
    pass


class RejectionStarvation(QARError):
    pass


class RegimeWarning(UserWarning):
    """Soft validity condition (rotating-wave or Born-Markov) is not met."""


class NegativeVirtualTemperatureWarning(UserWarning):
    pass
