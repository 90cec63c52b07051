"""
Exceptions raised by the laboratory.

Every failure named by an operation is a subclass of ``LabError`` so callers can catch the
whole family at once; ``LabError`` itself is a ``ValueError``.
"""


class LabError(ValueError):
    """Base class for domain failures."""


class InvalidProbability(LabError):
    """A probability vector is empty, non-positive, unranked or does not sum to 1."""


class NotRanked(LabError):
    """The hub family solve produced a vector whose hubs are lighter than the tail."""


class DegenerateTail(LabError):
    """The hub family has no tail vertices (n equals the number of hubs)."""


class MalformedCode(LabError):
    """A parent code has the wrong length or entries outside [n]."""


class InvalidStructure(LabError):
    """A parent array or plane order does not describe a rooted tree."""


class TooLarge(LabError):
    """Exhaustive enumeration was requested above the hard size limit."""


class WeightMismatch(LabError):
    """A weight vector does not cover the vertices of a structure."""


class InconsistentOrder(LabError):
    """An ordered basin decomposition or plane order does not belong to the mapping."""


class OutOfRange(LabError):
    """A time or size argument lies outside its admissible range."""


class HeightTie(LabError):
    """Two generalized excursions share a height and tie-breaking is disabled."""


class SpineMismatch(LabError):
    """The vertex visited at time u is not the end of the given spine."""


class NonBridge(LabError):
    """A path handed to the cyclic shift does not return to its starting value."""


class DegenerateTheta(LabError):
    """The Brownian weight theta0 vanishes."""


class UnknownVertex(LabError):
    """A reduction target is not a vertex of the tree."""


class NonpositiveScale(LabError):
    """A tree was rescaled by a non-positive factor."""


class EmptySample(LabError):
    """A statistic was requested on an empty sample."""


class SupportMismatch(LabError):
    """Two finite laws are indexed by different supports."""


class ConfigError(LabError):
    """An experiment configuration or file cannot be used."""
