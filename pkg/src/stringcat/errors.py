"""Exception types shared across the package."""


class StringCatError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(StringCatError, ValueError):
    """Invalid configuration: bad n-gram range, dimension, probability, ..."""


class EncodeError(StringCatError):
    """A string could not be encoded (e.g. it yields no n-grams)."""


class VocabularyError(StringCatError):
    """Vocabulary construction or lookup failed (e.g. empty corpus)."""


class EvaluationError(StringCatError):
    """An evaluation metric received input it cannot score."""


class NumericError(StringCatError):
    """A numeric domain violation (zero rate under positive count, non-finite value)."""
