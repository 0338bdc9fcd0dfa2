"""Exception hierarchy shared by every module."""


class OkbError(Exception):
    """Base class for domain errors raised by the toolkit."""


class InputError(OkbError, ValueError):
    """Malformed input data (bad JSON shape, unparsable rational, ...)."""


class DimensionMismatchError(OkbError, ValueError):
    pass


class InvalidArgumentError(OkbError, ValueError):
    pass


class UnboundedError(OkbError):
    """A half-space system cuts out an unbounded region."""


class EmptyBodyError(OkbError):
    pass


class NotPseudoeffectiveError(OkbError):
    pass


class InsideBaseLocusError(OkbError):
    """The requested subvariety lies inside the restricted base locus."""


class ModelInconsistentError(OkbError):
    """A surface model cannot support the requested decomposition.

    Usually the list of negative curves is incomplete.
    """


class UnboundedLPError(OkbError):
    pass
