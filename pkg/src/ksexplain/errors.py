"""Exception hierarchy shared by every module of the package."""


class KsExplainError(Exception):
    """Base class for all errors raised by ksexplain."""


class InvalidSignificance(KsExplainError, ValueError):
    pass


class EmptySample(KsExplainError, ValueError):
    pass


class UnknownPointId(KsExplainError, IndexError):
    pass


class DuplicatePointId(KsExplainError, ValueError):
    pass


class ExceedsMultiplicity(KsExplainError, ValueError):
    pass


class RemovedEverything(KsExplainError, ValueError):
    pass


class InvalidSize(KsExplainError, ValueError):
    pass


class NotQualifiedSize(KsExplainError, ValueError):
    pass


class SubsetTooLarge(KsExplainError, ValueError):
    pass


class NoExplanationExists(KsExplainError):
    """No subset of at most m-1 test points reverses the failed test.

    Only reachable when alpha > 2/e^2.
    """


class TestNotFailed(KsExplainError):
    """Raised when an explanation is requested for a test that already passes."""

    __test__ = False  # keep pytest from collecting this class


class InvalidPreference(KsExplainError, ValueError):
    pass


class InternalVerificationFailure(KsExplainError, AssertionError):
    """A returned subset did not reverse the test. Always a bug."""


class InstanceTooLarge(KsExplainError, ValueError):
    pass


class InvalidFraction(KsExplainError, ValueError):
    pass


class InvalidWindow(KsExplainError, ValueError):
    pass


class SeriesTooShort(KsExplainError, ValueError):
    pass


class ParseError(KsExplainError, ValueError):
    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
        if line is not None:
            where = f"{where}:{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)
