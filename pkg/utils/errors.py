class QgateError(Exception):
    """Base class for every error raised by the gate analysis library"""


class DimensionError(QgateError):
    pass


class BipartitionError(QgateError):
    pass


class DegenerateInputError(QgateError):
    pass


class NotDiagonalError(QgateError):
    pass


class NotUnitaryError(QgateError):
    pass


class DegenerateSpanError(QgateError):
    pass


class NonUniqueDecompositionError(QgateError):
    """The gate admits infinitely many two-term Schmidt decompositions"""


class NotGenuineError(NonUniqueDecompositionError):
    pass


class NotSchmidtRankTwoError(QgateError):
    pass


class InternalInvariantViolation(QgateError):
    """A computed quantity contradicts a proven property; signals numeric failure"""


class ParamDomainError(QgateError):
    pass


class NotOnVarietyError(ParamDomainError):
    pass


class SolverDivergedError(QgateError):
    pass


class QgateParseError(QgateError):
    pass
