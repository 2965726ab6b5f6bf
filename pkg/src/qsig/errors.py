"""Exception hierarchy shared by the toolkit."""


class QsigError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(QsigError, ValueError):
    """Scheme or code parameters violate a structural constraint."""


class InsecureParametersError(ParameterError):
    """The attacker's leakage budget meets or exceeds the hidden entropy."""


class DimensionError(QsigError, ValueError):
    """Lengths of strings, index sets or vectors do not line up."""


class DomainError(QsigError, ValueError):
    """A numeric argument lies outside the function's domain."""


class ResourceError(QsigError):
    """A dense oracle computation was requested beyond its size limit."""


class SweepError(QsigError):
    """A parameter sweep produced no admissible point."""
