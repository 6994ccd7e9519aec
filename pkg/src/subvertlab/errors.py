"""Exception hierarchy.

ParameterError covers configuration mistakes (CLI exit code 2);
InvariantViolation covers consistency failures detected mid-run (exit code 3).
"""


class SubvertLabError(Exception):
    """Base class for all package errors."""


class ParameterError(SubvertLabError, ValueError):
    """Invalid parameter or configuration value."""


class LengthMismatchError(ParameterError):
    """Two components disagree about a bit length."""


class InvalidHistoryError(SubvertLabError):
    """History rejected by a channel grammar."""


class NoExactPmfError(SubvertLabError):
    """Channel does not expose an exact pmf."""


class WrongDocumentCountError(SubvertLabError):
    """Decoder handed a document sequence of the wrong length."""


class ScheduleError(ParameterError):
    """Reboot schedule segment lengths do not sum to the output length."""


class InvariantViolation(SubvertLabError):
    """A runtime consistency check failed."""


class UniversalityViolation(InvariantViolation):
    """Universal attack touched a host field outside its allowed interface."""


class SchemaMismatchError(SubvertLabError):
    """Report file carries an unexpected schema version."""
