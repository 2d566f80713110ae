"""Exception types shared across the package.

Every error carries a stable machine-readable ``category`` string so the
command line tool can report failures in a scriptable way.
"""


class ContactShapeError(Exception):
    """Base class for all package errors."""

    category = "error"


class InvalidArgumentError(ContactShapeError):
    """Bad argument values, malformed files, or dimension mismatches."""

    category = "invalid-argument"


class InvalidReadingError(ContactShapeError):
    """A sensor reading violates its physical constraints."""

    category = "invalid-reading"


class SingularPointError(ContactShapeError):
    """A point-load solution was requested at its singular point."""

    category = "singular-point"


class UnsupportedModelError(ContactShapeError):
    """Model/parameter combination outside the implemented regime."""

    category = "unsupported-model"


class NumericalFailureError(ContactShapeError):
    """A numerical routine failed to produce a usable result."""

    category = "numerical-failure"


class ResourceLimitError(ContactShapeError):
    """A desk-scale guard tripped before an intractable computation."""

    category = "resource-limit"


class OracleFailureError(ContactShapeError):
    """A verification oracle could not reach the requested accuracy."""

    category = "oracle-failure"
