"""Exception hierarchy shared by all modules."""


class WordRankError(Exception):
    """Base class for errors raised by this package."""


class ParseError(WordRankError, ValueError):
    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class RankError(WordRankError, ValueError):
    pass


class DomainError(WordRankError, ValueError):
    """An argument outside the mathematical domain of an operation."""


class PreconditionError(WordRankError, ValueError):
    pass


class ResourceError(WordRankError, RuntimeError):
    """A configured enumeration cap would be exceeded."""


class UnsupportedParameterError(WordRankError, ValueError):
    pass


class InternalInvariantError(WordRankError, AssertionError):
    """A result failed its own post-hoc validation."""


class ConstructionError(WordRankError, ValueError):
    """Malformed input to a constructor (e.g. mismatched dimensions)."""


class InsufficientDataError(WordRankError, ValueError):
    pass
