"""Exception hierarchy shared by all modules."""


class TYError(Exception):
    """Base class for every error raised by :mod:`tycat`."""


class InputError(TYError, ValueError):
    """Malformed or mismatched arguments (wrong dimensions, foreign elements, bad flags)."""


class SizeError(TYError):
    """A brute-force routine was asked to work above its configured bound."""


class InvariantError(TYError, ValueError):
    """A value violates a structural invariant (degenerate bicharacter, non-unitary gamma, ...)."""


class ParseError(TYError, ValueError):
    """Serialized input could not be decoded."""


class PreconditionError(TYError):
    """Data handed to the normalization pipeline does not pass verification."""


class InconsistencyError(TYError):
    """A derived identity failed mid-pipeline, so the input was not valid TY data."""
