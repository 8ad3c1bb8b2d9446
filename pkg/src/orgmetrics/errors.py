"""Exception types shared across the engine."""


class OrgMetricsError(Exception):
    """Base class for all engine errors."""


class SchemaError(OrgMetricsError):
    """Input document does not match the expected schema."""


class RowError(OrgMetricsError):
    """A CSV row could not be parsed; carries the 1-based row number."""

    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row


class DuplicateIdError(OrgMetricsError):
    """An identifier that must be unique appeared more than once."""


class RangeError(OrgMetricsError):
    """A rating or weight fell outside the allowed [0, 100] range."""


class UnknownCategoryError(OrgMetricsError):
    """Category id is not present in the weight profile."""


class UnknownEmployeeError(OrgMetricsError):
    """Employee id is not present in the roster."""


class UnknownKeyError(OrgMetricsError):
    """Sort or lookup key does not exist on the referenced axis."""


class DegenerateScaleError(OrgMetricsError):
    """A color scale cannot be built (no positive scores)."""


class CoverageError(OrgMetricsError):
    """A clustering result does not cover every employee in context."""


class InvalidKError(OrgMetricsError):
    """Cluster count k is outside [1, number of employees]."""


class InvalidParamsError(OrgMetricsError):
    """Projection parameters are invalid for the given data."""


class VersionMismatchError(OrgMetricsError):
    """Client-supplied version does not match the current state version."""

    def __init__(self, supplied, current):
        super().__init__(f"stale version {supplied}; current is {current}")
        self.supplied = supplied
        self.current = current
