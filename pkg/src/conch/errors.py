"""Exception types shared across the engine."""


class ConchError(Exception):
    """Base class for all engine errors."""


class MalformedDocument(ConchError):
    """Input is not syntactically valid (bad UTF-8 or bad JSON)."""


class SchemaViolation(ConchError):
    """Document structure does not match the corpus or transcript schema."""

    def __init__(self, message, issues=None):
        super().__init__(message)
        self.issues = list(issues or [])


class DuplicateId(ConchError):
    """An id appears more than once in its namespace."""


class DanglingReference(ConchError):
    """A reference points at an id that does not exist."""


class EmptyTurn(ConchError):
    """A turn with no text cannot be segmented."""


class LlmUnavailable(ConchError):
    """The language-model backend could not be reached after retries."""


class LlmOutputUnparsable(ConchError):
    """A model response did not match the expected response schema."""


class UnknownStrategyId(ConchError):
    """A strategy tag names an id missing from the catalog."""


class DegenerateAgreement(ConchError):
    """Agreement statistic undefined: expected agreement equals 1."""


class EmptyPrediction(ConchError):
    """Precision is undefined for an empty prediction set."""


class NegativeRadius(ConchError):
    """A spiral radius goes negative over the requested interval."""


class AngleCapExceeded(ConchError):
    """No angle at or below the cap reaches the requested arc length."""


class AngleFloorUnmet(ConchError):
    """The requested arc length is shorter than the arc at the angle floor."""


class UnknownFilterTarget(ConchError):
    """A scene filter names an id that does not resolve in the corpus."""
