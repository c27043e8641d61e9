"""Exception hierarchy shared across the package."""

from __future__ import annotations


class ArgmineError(Exception):
    """Base class for all package-specific errors."""


class ThreadParseError(ArgmineError):
    """Raw thread document is not valid JSON; message names the byte offset."""


class SchemaError(ArgmineError):
    """A JSON document is missing or mistypes a required field; message names the JSON path."""


class LabelValidationError(ArgmineError):
    """A label combination violates the coding-schema invariants."""


class QuoteReferenceError(ArgmineError):
    """A label row references a quote id that does not exist."""


class ConfigurationError(ArgmineError):
    """A requested feature set, model, or file combination is not usable as configured."""


class FitError(ArgmineError):
    """A model cannot be fitted on the given data (empty corpus, single class, ...)."""


class LeakageError(ArgmineError):
    """A feature model was fitted on quotes outside the current training fold."""


class FetchError(ArgmineError):
    """Remote issue retrieval failed after retries."""
