"""Exception types shared by the verification modules."""


class PreslabError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(PreslabError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class PreconditionError(PreslabError, ValueError):
    """The hypotheses an operation needs are not met by its inputs."""


class BoundError(PreslabError, ValueError):
    """An exhaustive enumeration was asked to exceed its configured bound."""


class NoWitnessError(PreconditionError):
    """The supplied data does not witness a discontinuity."""
