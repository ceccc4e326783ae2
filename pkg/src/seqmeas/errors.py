"""Exception types shared across the package."""


class SeqmeasError(Exception):
    """Base class for all seqmeas errors."""


class InvalidParameter(SeqmeasError, ValueError):
    """An input value is outside its legal domain (non-finite, wrong range, ...)."""


class DegenerateCoupling(SeqmeasError, ValueError):
    """The coupling carries no usable information for the requested channel.

    Raised when the measurement strength is (numerically) zero, so the meter
    record says nothing about the first observable, or when the coupling is
    projective, so the coherent part of the signal needed to correct the
    second observable has been destroyed.
    """


class DegenerateDistribution(SeqmeasError, ValueError):
    """An outcome probability sits on the boundary {0, 1}; Fisher information diverges."""


class UnboundedVariance(SeqmeasError, ValueError):
    """Zero Fisher information: the Cramer-Rao bound is infinite."""
