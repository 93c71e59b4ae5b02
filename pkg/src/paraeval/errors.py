"""Exception hierarchy for the toolkit.

Two broad families matter to callers: :class:`ValidationError` for bad data
or degenerate inputs, and :class:`ProviderError` for failures of an
embedding provider. The CLI maps them to distinct exit codes.
"""


class ParaEvalError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(ParaEvalError):
    """Invalid, inconsistent, or degenerate data."""


class ProviderError(ParaEvalError):
    """An embedding provider failed or is unreachable."""


# -- sequence / metric inputs -------------------------------------------------

class EmptySequenceError(ValidationError):
    """A metric received an empty token sequence where one is not allowed."""


class BothEmptyError(ValidationError):
    """Normalized edit distance is undefined when both sequences are empty."""


class DomainError(ValidationError):
    """A numeric argument fell outside its documented domain."""


class MissingReferenceError(ValidationError):
    """A reference-based operation was applied to an instance without a reference."""


class DegenerateDenominatorError(ValidationError):
    """A closed-form expression was evaluated where its denominator vanishes."""


# -- embeddings ---------------------------------------------------------------

class ProviderUnavailableError(ProviderError):
    """The remote embedding service could not be reached."""


class MissingEmbeddingError(ProviderError):
    """A file-backed provider has no vector for a token and no default vector."""


class DimensionMismatchError(ValidationError):
    """Embedding matrices (or providers in the same run) disagree on dimension."""


class EmptyEmbeddingsError(ValidationError):
    """Greedy matching needs at least one embedded token on each side."""


# -- statistics ---------------------------------------------------------------

class LengthMismatchError(ValidationError):
    """Paired vectors or report lists differ in length."""


class ConstantInputError(ValidationError):
    """A correlation was requested against a constant vector."""


class TooFewInstancesError(ValidationError):
    """Not enough instances for the requested partition."""


class TooFewPairsError(ValidationError):
    """Not enough attribution pairs to report a correlation."""


class DegenerateHumanScoresError(ValidationError):
    """Human scores are constant, so no objective can rank configurations."""


class EmptyGridError(ValidationError):
    """A tuning grid must contain at least one point."""


# -- benchmark files ----------------------------------------------------------

class ParseError(ValidationError):
    """A benchmark file is malformed. Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ScoreOutOfRangeError(ParseError):
    """A human score outside [0, 1] was encountered while loading."""


class DuplicateRecordError(ParseError):
    """The same (input, candidate) pair appeared twice in one benchmark file."""


class TooFewGroupsError(ValidationError):
    """Dev/test splitting needs a minimum number of input groups."""
