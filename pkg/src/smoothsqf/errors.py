"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: :class:`IdentityViolation` is an
assertion-class failure (exit 2), :class:`ResourceError` a budget problem
(exit 3).
"""


class DomainError(ValueError):
    """Arguments outside the mathematical domain of an operation."""


class ResourceError(RuntimeError):
    """A configured memory or search budget would be exceeded."""


class NeedsLargerSieve(ResourceError):
    """A cofactor could not be resolved with the primes available."""


class IdentityViolation(AssertionError):
    """Two routes to an exact quantity disagreed."""
