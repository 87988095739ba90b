"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`GrandMorreyError`, which is itself a :class:`ValueError`.
"""


class GrandMorreyError(ValueError):
    pass


# space construction
class InvalidSpace(GrandMorreyError):
    pass


class ZeroDistanceDistinctPair(InvalidSpace):
    pass


class NegativeDistance(InvalidSpace):
    pass


class NonPositiveWeight(InvalidSpace):
    pass


class NonZeroDiagonal(InvalidSpace):
    pass


class InvalidSpec(GrandMorreyError):
    """Bad generator name or generator arguments."""


class DegenerateScale(GrandMorreyError):
    """No (center, radius) pair survives the cell-scale filter."""


# operators / kernels
class EmptyGate(GrandMorreyError):
    """No triple passes the smoothness-condition gate."""


# analysis
class UnknownConstant(GrandMorreyError):
    pass


class DomainError(GrandMorreyError):
    """Parameters outside the domain of a closed-form constant."""


class GridTooCoarse(GrandMorreyError):
    pass


class ZeroFunction(GrandMorreyError):
    pass


class EmptyFamily(GrandMorreyError):
    pass


class InadmissibleParams(GrandMorreyError):
    pass


# cli
class ConfigParseError(GrandMorreyError):
    pass


class AdmissibilityError(GrandMorreyError):
    pass


class UnsupportedFormat(GrandMorreyError):
    pass


class IoError(GrandMorreyError, OSError):
    pass
