"""Exception types shared across the package."""


class LirError(Exception):
    pass


class EmptyReference(LirError, ValueError):
    pass


class LanguageMismatch(LirError, ValueError):
    pass


class EmptyTranscript(LirError, ValueError):
    pass


class SteppedTerminated(LirError, RuntimeError):
    """step() was called on a machine already in End."""


class BackendError(LirError):
    pass


class BackendUnavailable(BackendError):
    """Transport failure after the retry budget was spent."""


class MalformedResponse(BackendError):
    pass


class ScoreParseFailure(MalformedResponse):
    pass


class BackendConfigError(LirError, ValueError):
    pass


class DataError(LirError):
    pass


class IoFailure(DataError):
    pass


class SchemaViolation(DataError):
    def __init__(self, line: int, field: str, message: str):
        super().__init__(f"line {line}: {field}: {message}")
        self.line = line
        self.field = field


class MissingReference(DataError):
    pass


class MissingNBest(DataError):
    pass
