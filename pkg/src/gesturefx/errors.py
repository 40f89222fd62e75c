"""Exception types shared across the package.

Plain argument errors (empty input, out-of-range rate, bad label) raise the
builtin ValueError; the classes here cover failures that callers are expected
to catch and act on.
"""


class GestureFxError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(GestureFxError):
    """Array shapes do not satisfy an operation's contract."""


class ConfigError(GestureFxError):
    """A sliding-window or trigger configuration is invalid for its input."""


class StateError(GestureFxError):
    """A backward pass was handed a tape that does not match its parameters."""


class DataError(GestureFxError):
    """A dataset violates a training/evaluation precondition (e.g. no label)."""


class ParseError(DataError):
    """A file could not be decoded; the message names the offending location."""


class SchemaError(DataError):
    """A decoded document has the wrong structure (joint count, field types)."""


class MissingJointError(GestureFxError):
    """A required joint is flagged missing where the operation needs it."""


class PoseError(GestureFxError):
    """A pose is geometrically degenerate (e.g. zero torso length)."""


class GapError(GestureFxError):
    """A missing-data gap is too long to reconstruct."""


class CheckpointVersionError(GestureFxError):
    """A checkpoint file declares an unsupported format version."""
