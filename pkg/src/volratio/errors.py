"""Exception hierarchy shared across the package."""

from __future__ import annotations


class VolratioError(Exception):
    """Base class for all package-specific errors."""


class IngestError(VolratioError):
    """CSV or manifest input could not be parsed or produced no data."""


class AlignmentError(VolratioError):
    """Two dated series share no usable dates."""


class DataQualityError(VolratioError):
    """Input data violates a hard quality requirement (e.g. zero-variance window)."""


class FittingError(VolratioError):
    """Maximum-likelihood estimation could not be carried out."""


class DegenerateDataError(FittingError):
    """All data points coincide; the MLE is undefined."""
