"""Exception types shared across the package.

The CLI maps these to exit codes: InputError is user error (exit 2),
ResourceLimitError means a configured cap was hit (exit 3).
"""


class SfcError(Exception):
    pass


class InputError(SfcError):
    """Malformed input: bad syntax, bad JSON, violated precondition."""


class ResourceLimitError(SfcError):
    """A computation exceeded one of the configured size caps."""
