"""Exception hierarchy shared by all pipeline stages."""


class GenderMIError(Exception):
    """Base class for every error raised by this package."""


class ConlluError(GenderMIError):
    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class MalformedLine(ConlluError):
    pass


class InvalidHead(ConlluError):
    pass


class MalformedFeatures(ConlluError):
    pass


class LexiconError(GenderMIError):
    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class BadClassLabel(LexiconError):
    pass


class ConflictingDuplicate(LexiconError):
    pass


class EmptyCounts(GenderMIError):
    pass


class EmptyTable(GenderMIError):
    pass


class NotNormalized(GenderMIError):
    pass


class DegenerateNormalizer(GenderMIError):
    pass


class UnassignedNoun(GenderMIError):
    pass


class SingleGender(GenderMIError):
    pass


class TooFewNouns(GenderMIError):
    pass


class LabelMultisetMismatch(GenderMIError):
    pass


class InvalidParams(GenderMIError):
    pass


class ConfigError(GenderMIError):
    pass


class EmptyCorpus(GenderMIError):
    pass


class StageError(GenderMIError):
    """A pipeline stage failed; carries the stage name and discard counts so far."""

    def __init__(self, stage, cause, counts=None):
        self.stage = stage
        self.cause = cause
        self.counts = dict(counts or {})
        super().__init__(f"stage '{stage}' failed: {cause} (counts: {self.counts})")
