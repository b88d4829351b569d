"""Exception hierarchy shared by every module of the package."""


class HsiTuckerError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(HsiTuckerError, ValueError):
    """Shapes do not conform (bad tensor, wrong mode extent, wrong fold target)."""

    def __init__(self, message, mode=None):
        super().__init__(message)
        self.mode = mode


class RankError(HsiTuckerError, ValueError):
    """Requested rank is outside the admissible range."""


class InputError(HsiTuckerError, ValueError):
    """Input values are unusable (non-finite, empty, not orthonormal)."""


class DegenerateInputError(HsiTuckerError, ValueError):
    """Input is well-formed but degenerate (zero norm, constant cube)."""


class RateInfeasibleError(HsiTuckerError, ValueError):
    """The bit budget cannot hold even the smallest admissible model."""


class FormatError(HsiTuckerError, ValueError):
    """A binary container is malformed; ``offset`` is the byte where it went wrong."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class HeaderParseError(HsiTuckerError, ValueError):
    """An ENVI header is missing a key or carries an invalid value."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class TruncationError(HsiTuckerError, ValueError):
    """A raw payload does not have the byte length its descriptor declares."""

    def __init__(self, expected, actual):
        super().__init__(f"payload has {actual} bytes, expected {expected}")
        self.expected = expected
        self.actual = actual
