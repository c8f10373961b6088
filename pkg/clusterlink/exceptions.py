"""
Exception hierarchy shared by the numerical core, the simulator and the CLI.
"""

from typing import Any, Dict, Optional


class ClusterLinkError(Exception):
    """Base class for all ClusterLink errors."""
    pass


class NumericFailure(ClusterLinkError):
    """
    Raised when a series, recurrence or quadrature fails to reach tolerance.

    Carries whatever was computed before giving up so callers can log or
    inspect it.
    """

    def __init__(
        self,
        message: str,
        partial_value: Optional[float] = None,
        terms: int = 0,
        context: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.partial_value = partial_value
        self.terms = terms
        self.context = dict(context or {})

    def with_context(self, **extra) -> 'NumericFailure':
        """Return a copy with extra context (e.g. the offending error count)."""
        context = {**self.context, **extra}
        details = ', '.join(f'{k}={v}' for k, v in extra.items())
        return NumericFailure(
            f'{self.args[0]} ({details})',
            partial_value=self.partial_value,
            terms=self.terms,
            context=context,
        )


class UnsupportedRegime(ClusterLinkError):
    """Raised when an analytic result is requested outside its derivation's regime."""
    pass


class NoFiniteBound(ClusterLinkError):
    """Raised when a device-count bound has no finite real solution."""
    pass


class DomainError(ClusterLinkError, ValueError):
    """Raised when an argument lies outside the domain an operation accepts."""
    pass


class InvalidConfiguration(ClusterLinkError, ValueError):
    """
    Raised when an experiment configuration fails validation.

    errors maps each offending key ('__all__' for cross-field problems) to
    its messages.
    """

    def __init__(self, message: str, errors: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.errors = dict(errors or {})
