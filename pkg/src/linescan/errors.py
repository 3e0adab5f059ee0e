"""Exception types raised across the scanning pipeline."""


class ScanError(Exception):
    """Base class for all pipeline errors."""


class AlphaOutOfRange(ScanError, ValueError):
    pass


class EmptyScan(ScanError):
    """Raised when a frame, curve or point sequence has nothing to work on."""


class InvalidCalibration(ScanError, ValueError):
    pass


class FrameCountMismatch(ScanError, ValueError):
    pass


class TooFewPoints(ScanError, ValueError):
    pass


class UnitMismatch(ScanError, ValueError):
    pass


class ParseError(ScanError, ValueError):
    """Malformed point-cloud, scene or calibration text.

    ``line`` is the 1-based line number of the offending input line, or
    ``None`` when the problem is not tied to one line.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FrameDecodeError(ScanError):
    pass


class LaserOutOfScene(ScanError, ValueError):
    pass
