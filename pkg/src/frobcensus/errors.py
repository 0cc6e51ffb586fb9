"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: invalid input 2, capacity 3,
internal consistency 4.
"""


class FrobCensusError(Exception):
    exit_code = 1


class InvalidInputError(FrobCensusError, ValueError):
    exit_code = 2


class CapacityError(FrobCensusError):
    exit_code = 3


class ConsistencyError(FrobCensusError, AssertionError):
    """A mathematical invariant failed; this signals a bug, not bad input."""

    exit_code = 4
