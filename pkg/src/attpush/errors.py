"""Exception hierarchy shared by all modules."""


class AttPushError(Exception):
    """Base class for every error raised by attpush."""


class ZeroVariance(AttPushError, ValueError):
    """The map is constant, so moments beyond the mean are undefined."""


class DimensionMismatch(AttPushError, ValueError):
    pass


class DegenerateDirection(AttPushError, ValueError):
    """A pose has no image-plane direction (it faces the camera)."""


class TimeBeforeOnset(AttPushError, ValueError):
    pass


class NoFixations(AttPushError, ValueError):
    pass


class EmptyInput(AttPushError, ValueError):
    pass


class ParseError(AttPushError, ValueError):
    """Malformed input file.  ``location`` names the line or field at fault."""

    def __init__(self, message, path=None, location=None):
        self.path = path
        self.location = location
        where = ""
        if path is not None:
            where += f"{path}"
        if location is not None:
            where += f" [{location}]" if where else f"[{location}]"
        super().__init__(f"{where}: {message}" if where else message)


class SchemaVersionMismatch(ParseError):
    pass
