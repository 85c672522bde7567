"""Exception hierarchy shared across the library and the CLI exit-code map."""


class MvspError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(MvspError, ValueError):
    """Bad user input: malformed config, inconsistent shapes, out-of-domain points."""


class ResourceLimitError(MvspError):
    """A hard cap would be exceeded (statevector qubit cap, unitary size cap)."""


class NumericDomainError(MvspError, ArithmeticError):
    """Numerics left the valid domain: non-finite samples, degenerate postselection."""
