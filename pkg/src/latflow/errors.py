"""Shared exception types; the CLI maps them onto exit codes."""


class InputError(ValueError):
    """Malformed or out-of-contract input (CLI exit code 2)."""


class BudgetError(RuntimeError):
    """An enumeration or grid budget was exceeded (CLI exit code 3)."""


class InvariantError(RuntimeError):
    """An internal invariant failed; indicates a bug.  Deliberately not
    mapped to a CLI exit code: it should surface as a crash."""
