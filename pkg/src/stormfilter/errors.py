"""Exception hierarchy shared by all stormfilter modules.

The CLI maps these onto distinct process exit codes, so new failure modes
should subclass one of the four top-level categories below instead of
raising bare ValueErrors.
"""


class StormfilterError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(StormfilterError, ValueError):
    """An operation was called with arguments violating its preconditions."""


class FormatError(StormfilterError):
    """A file on disk is malformed. Carries positional diagnostics."""

    def __init__(self, message, path=None, byte_offset=None, point_index=None):
        self.path = path
        self.byte_offset = byte_offset
        self.point_index = point_index
        parts = [message]
        if path is not None:
            parts.append(f"file={path}")
        if byte_offset is not None:
            parts.append(f"byte_offset={byte_offset}")
        if point_index is not None:
            parts.append(f"point_index={point_index}")
        super().__init__(" | ".join(str(p) for p in parts))


class CheckpointError(FormatError):
    """A checkpoint file is unreadable or has an incompatible version."""


class DataConsistencyError(StormfilterError):
    """Paired inputs disagree (e.g. scan and label files of different length)."""


class ConfigError(StormfilterError):
    """Configuration file failed to parse or validate."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        loc = ""
        if path is not None:
            loc = f" ({path}" + (f":{line}" if line is not None else "") + ")"
        super().__init__(f"{message}{loc}")


class UndefinedMetricError(StormfilterError):
    """A ranking metric was requested on a degenerate label composition."""


class NumericDivergenceError(StormfilterError):
    """Training produced a non-finite loss or parameter vector."""
