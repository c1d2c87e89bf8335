"""Exception types shared across the package.

Everything derives from :class:`TwincastError` so callers can catch one base
class at CLI boundaries while tests assert on the precise failure kind.
"""


class TwincastError(Exception):
    """Base class for all twincast failures."""


class SchemaError(TwincastError, ValueError):
    """CSV header does not match the expected column schema."""


class ParseError(TwincastError, ValueError):
    """A cell could not be parsed; message carries the data row number."""


class OrderingError(TwincastError, ValueError):
    """Timestamps are not strictly increasing at a constant interval."""


class SizeError(TwincastError, ValueError):
    """An input series or split is too short for the requested operation."""


class EstimationError(TwincastError, ValueError):
    """A statistic was requested from an empty or non-finite sample."""


class ShapeError(TwincastError, ValueError):
    """Array shapes disagree with the declared layout."""


class StateError(TwincastError, ValueError):
    """A forward cache was paired with a model it does not belong to."""


class TrainingError(TwincastError, ValueError):
    """Training preconditions are not met (e.g. empty training set)."""


class DivergenceError(TwincastError, RuntimeError):
    """Loss became non-finite; message reports the epoch and batch."""


class CompatibilityError(TwincastError, ValueError):
    """Checkpoint and run configuration disagree (window, features, scaler)."""
