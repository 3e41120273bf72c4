"""Exception taxonomy for the nonlocal-NLS toolkit."""


class NonlocalNLSError(Exception):
    """Base class for all toolkit errors."""


class BadInput(NonlocalNLSError):
    """Malformed configuration or potential descriptor."""


class IntegratorDivergence(NonlocalNLSError):
    """Step control failed to reach the requested tolerance."""


class TruncationTooSmall(NonlocalNLSError):
    """Potential tail outside the integration window is not negligible."""


class GenericityViolation(NonlocalNLSError):
    """a(z) nearly vanishes or 1 - r(z) rbreve(z) nearly vanishes."""


class NotPiecewiseConstant(NonlocalNLSError):
    """Exact transfer-matrix route requires a box potential."""


class BranchViolation(NonlocalNLSError):
    """Unwrapped arg(1 - r rbreve) reached +-pi; log branch ill-defined."""


class CutEvaluation(NonlocalNLSError):
    """delta(z) requested on its branch cut (-inf, xi]."""


class QuadratureFailure(NonlocalNLSError):
    """Adaptive quadrature exceeded its budget or error estimate."""


class NonpositiveTime(NonlocalNLSError):
    """Operation requires t > 0."""


class OutOfValidityBox(NonlocalNLSError):
    """Parabolic-cylinder evaluation outside the supported (a, eta) box."""


class SeriesNonConvergence(NonlocalNLSError):
    """Neither series nor asymptotic expansion reached tolerance."""


class ValidityViolation(NonlocalNLSError):
    """Asymptotic formula requested where |Im nu(xi)| >= 1/4."""


class WindowExceeded(NonlocalNLSError):
    """Stationary point falls outside the interior of the spectral grid."""


class BoundaryContamination(NonlocalNLSError):
    """Dispersive front reached the outer band of the spatial domain."""


class StepTooLarge(NonlocalNLSError):
    """Time step does not resolve the fastest populated mode."""


class MissingInputs(NonlocalNLSError):
    """Report stage invoked before the inputs it consumes exist."""
