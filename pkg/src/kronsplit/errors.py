"""Exception hierarchy."""


class KronSplitError(Exception):
    """Base class for all package errors."""


class ParseError(KronSplitError, ValueError):
    pass


class ModeError(KronSplitError, TypeError):
    """Exact and float scalars were mixed in one computation."""


class SingularMatrixError(KronSplitError, ArithmeticError):
    pass


class SingularBlockError(SingularMatrixError):
    """The eliminated block of a Schur complement is singular."""

    def __init__(self, dropped):
        self.dropped = tuple(dropped)
        super().__init__(
            f"eliminated block on indices {list(self.dropped)} is singular "
            "(disconnected interior component?)"
        )


class DisconnectedError(KronSplitError):
    pass


class SizeGuardError(KronSplitError):
    pass


class EmbeddingError(KronSplitError):
    pass


class NotKalmansonError(KronSplitError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class NotResistanceMetricError(KronSplitError):
    pass


class InconsistentMatchingError(KronSplitError):
    pass


class NonCriticalMatchingError(KronSplitError):
    pass


class AttachmentError(KronSplitError):
    def __init__(self, message, candidates=()):
        self.candidates = tuple(candidates)
        super().__init__(message)


class PipelineError(KronSplitError):
    """A reconstruction gate failed; ``step`` follows the five-step pipeline."""

    def __init__(self, step, reason, witness=None, detail=None):
        self.step = step
        self.reason = reason
        self.witness = witness
        self.detail = detail
        msg = f"step {step}: {reason}"
        if witness is not None:
            msg += f" (witness {witness})"
        super().__init__(msg)
