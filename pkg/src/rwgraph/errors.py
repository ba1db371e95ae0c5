"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end:
1 for malformed or invalid input, 2 for resource guards.
"""


class RWGraphError(Exception):
    exit_code = 1

    @property
    def name(self) -> str:
        return type(self).__name__


class ValidationError(RWGraphError):
    pass


class ProbSumMismatch(ValidationError):
    pass


class InvalidProbability(ValidationError):
    pass


class NegativeWeight(ValidationError):
    pass


class Disconnected(ValidationError):
    pass


class EmptyPhaseList(ValidationError):
    pass


class InvalidVertex(ValidationError):
    pass


class MissingAssignment(ValidationError):
    pass


class MissingDesignatedVertex(ValidationError):
    pass


class BadWitness(ValidationError):
    pass


class TooSmall(ValidationError):
    pass


class NotAPartition(ValidationError):
    pass


class NonPositiveThreshold(ValidationError):
    pass


class MixedParameters(ValidationError):
    pass


class ParseError(ValidationError):
    pass


class GuardError(RWGraphError):
    exit_code = 2


class TooLarge(GuardError):
    pass
