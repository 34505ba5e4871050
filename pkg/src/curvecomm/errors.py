"""Exception hierarchy shared by every module in the package."""

from __future__ import annotations


class CurveCommError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(CurveCommError, ValueError):
    """A scalar argument lies outside its admissible range."""


class InvalidPairError(InvalidParameterError):
    """A codeword pair is malformed (for instance ``i == j``)."""


class NotPhantomError(InvalidPairError):
    """The matched pairwise formula was requested on a non-phantom pair."""


class NumericFailureError(CurveCommError, ArithmeticError):
    """A computation produced a non-finite intermediate."""


class SingularModelError(InvalidParameterError):
    """The observation covariance is singular (``sigma_c`` too small)."""


class ConfigError(CurveCommError, ValueError):
    """A sweep configuration could not be parsed or validated."""
