"""Exception types shared across the package."""

from __future__ import annotations


class DriveFitError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(DriveFitError):
    """A configuration value is missing, malformed or out of range."""


# --- trip-log ingestion -------------------------------------------------

class TripLogError(DriveFitError):
    """Base class for ingestion failures."""


class SchemaMismatch(TripLogError):
    """The CSV is unreadable or lacks required columns."""


class EmptyLog(TripLogError):
    """Fewer than two valid samples after validation."""


class NonMonotonicTime(TripLogError):
    """Duplicate timestamps remain after sorting."""


class InvalidRows(TripLogError):
    """Rows with unparsable or out-of-domain values were rejected.

    Only raised when the skip-bad-rows policy is off; with the policy on
    the rows are dropped, counted and reported instead.
    """

    def __init__(self, message: str, rows: list[int]):
        super().__init__(message)
        self.rows = rows


class DurationTooShort(TripLogError):
    """The log spans fewer than two resample grid points."""


# --- metric kernels -----------------------------------------------------

class EmptyPopulation(DriveFitError):
    """Min-max scaling was asked for with no population values."""


class ZeroBaseline(DriveFitError):
    """A change rate against a zero baseline is undefined."""


# --- ride store ---------------------------------------------------------

class StoreError(DriveFitError):
    """Base class for ride-store failures."""


class DuplicateRideId(StoreError):
    """A ride with this id is already stored; the store is append-only."""


class RideNotFound(StoreError):
    """No stored ride has the requested id."""


class UnknownMetric(StoreError):
    """The metric name is not one of the published slots."""

    def __init__(self, name: str, valid: list[str]):
        super().__init__(f"unknown metric {name!r}; valid metrics: {', '.join(valid)}")
        self.name = name
        self.valid = valid


class StorageFailure(StoreError):
    """The backing files could not be read or written."""
