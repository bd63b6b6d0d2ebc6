"""Exception hierarchy shared across the package."""


class LoveError(Exception):
    """Base class for all errors raised by this package."""


class CoordinateError(LoveError, ValueError):
    """A latitude or longitude is missing, non-finite, or out of range."""


class ResolutionError(LoveError, ValueError):
    """A grid resolution outside the supported 2..7 range."""


class ResolutionMismatchError(LoveError, ValueError):
    """Mixed resolutions where a single one is required (e.g. table merge)."""


class FormatError(LoveError):
    """Input data does not conform to the expected file format."""


class SnapshotFormatError(FormatError):
    """A snapshot file has the wrong magic bytes or format version."""


class IntegrityError(LoveError):
    """A snapshot file is corrupt (checksum mismatch or truncation)."""
