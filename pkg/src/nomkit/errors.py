"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto process exit codes: UsageError exits 2,
DataError (including FormatError) exits 3.
"""


class NomkitError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class UsageError(NomkitError):
    """Caller error: bad parameter values, malformed flag input, misuse of an API."""

    exit_code = 2


class DataError(NomkitError):
    """Input data violates a contract (bad cell value, ragged row, arity mismatch)."""

    exit_code = 3


class FormatError(DataError):
    """Structurally invalid file (missing @data, unsupported attribute kind)."""
