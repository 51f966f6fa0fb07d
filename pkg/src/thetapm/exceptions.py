"""Error taxonomy for the workbench.

Input problems (bad arguments, unparsable files) and computational
failures (precision exhaustion, isolation failure) are kept distinct so
the command line layer can map them to different exit codes.
"""


class WorkbenchError(Exception):
    """Base class for all workbench failures."""


class InvalidArgument(WorkbenchError):
    """Caller passed a malformed or out-of-contract argument."""


class PrecisionError(WorkbenchError):
    """Not enough p-adic digits survive to certify the result."""


class TruncationError(WorkbenchError):
    """Series truncation degree too small for the requested operation."""


class IsolationFailure(WorkbenchError):
    """Simultaneous eigenspace did not become one-dimensional."""


class ResourceLimit(WorkbenchError):
    """Input exceeds a configured size bound."""


class BadReduction(WorkbenchError):
    """Operation requires good reduction at the given prime."""


class UnsupportedHypothesis(WorkbenchError):
    """Standing hypothesis (odd p, a_p = 0, ...) does not hold."""


class NotPseudoNull(WorkbenchError):
    """Local length is infinite: quotient not pseudo-null at the prime."""


class UnsupportedShape(WorkbenchError):
    """Ideal presentation not reducible to a supported shape."""


class CommonFactorWithinPrecision(WorkbenchError):
    """Resultant vanishes to working precision: common factor suspected."""
