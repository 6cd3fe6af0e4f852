"""Exception hierarchy shared by the estimation modules."""


class HybridSSRError(Exception):
    """Base class for all package errors."""


class DomainError(HybridSSRError, ValueError):
    """A parameter or argument lies outside its admissible domain."""


class SizeMismatch(HybridSSRError, ValueError):
    pass


class ZeroFailures(HybridSSRError):
    """A hybrid-censored sample ended with no observed failures."""


class DegenerateData(HybridSSRError):
    """The data cannot identify the shape parameter."""


class NonConvergence(HybridSSRError):
    pass


class NegativeDiscriminant(HybridSSRError):
    """The linearised scale equation has no real root."""


class NonpositiveSigma(HybridSSRError):
    pass


class SingularInformation(HybridSSRError):
    """Observed information is singular or not positive definite."""


class NonfiniteStudentization(HybridSSRError):
    pass


class BootstrapFailure(HybridSSRError):
    """Too many bootstrap resamples could not be fitted."""


class ImproperPosterior(HybridSSRError):
    pass


class EmptyChain(HybridSSRError):
    pass


class InsufficientDraws(HybridSSRError):
    pass


class CellAborted(HybridSSRError):
    """A simulation cell exceeded its failure budget."""
