"""Exception hierarchy shared by all modules."""


class MultiorderError(Exception):
    """Base class for all library errors."""


class MixedGroupError(MultiorderError):
    """Operands belong to different groups."""


class EmptySetError(MultiorderError):
    pass


class OutOfWindowError(MultiorderError):
    """A group element or position lies outside a finite window."""


class EmptyResultError(MultiorderError):
    """A window operation would produce a window of negative radius."""


class MalformedSpecError(MultiorderError):
    """Structurally broken tiling-system specification."""


class UnknownShapeError(MultiorderError):
    pass


class UncoveredCellError(MultiorderError):
    pass


class BaseTooLargeError(MultiorderError):
    pass


class BaseNotDividingError(MultiorderError):
    pass


class WindowNotDominatedError(MultiorderError):
    """Central tile at the requested depth does not contain the window."""


class OutOfRangeError(MultiorderError):
    pass


class RegionTooSmallError(MultiorderError):
    pass


class BadRegionError(MultiorderError):
    pass


class FloorsMismatchError(MultiorderError):
    pass


class PairNotDistinctError(MultiorderError):
    pass


class PairEqualError(MultiorderError):
    pass


class WindowTooSmallError(MultiorderError):
    pass


class NotOdometricError(MultiorderError):
    pass


class NotStraightError(MultiorderError):
    """The coder was handed an instance with a detected one-sided tail."""


class AlignmentViolationError(MultiorderError):
    """A tile center was found off the initial position of its range."""


class CodeOverflowError(MultiorderError):
    """Block universe exceeds the capacity of the code length."""


class DivisibilityViolationError(MultiorderError):
    pass


class UnknownBlockError(MultiorderError):
    """Block absent from the shared census (provenance mismatch)."""


class GroupMismatchError(MultiorderError):
    pass


class ConfigError(MultiorderError):
    """Invalid experiment configuration."""
