"""Exception hierarchy shared by every bsdlab module.

Everything raised on purpose derives from :class:`BsdlabError` so the CLI can
map library failures to a single exit code.  Most classes also inherit
``ValueError``: callers that never heard of bsdlab still get sane behaviour.
"""


class BsdlabError(Exception):
    """Base class for all errors raised deliberately by this package."""


class UsageError(BsdlabError):
    """Command line was malformed (unknown flag, missing argument)."""


class ConfigurationError(BsdlabError, ValueError):
    """A resource guard tripped: limit, budget, or parameter out of range."""


class RangeError(BsdlabError, ValueError):
    """Query outside the range covered by a precomputed table."""


class DomainError(BsdlabError, ValueError):
    """Argument outside the mathematical domain of the function."""


class SingularCurveError(BsdlabError, ValueError):
    """Weierstrass coefficients with vanishing discriminant."""


class PreconditionError(BsdlabError, ValueError):
    """Caller violated a documented contract (wrong reduction type, bad order)."""


class InsufficientDataError(BsdlabError, ValueError):
    """Not enough points/records to perform the requested fit or statistic."""


class SingularFitError(BsdlabError, ValueError):
    """Least-squares design matrix is degenerate (e.g. all abscissae equal)."""


class DataCorruptionError(BsdlabError):
    """Stored or computed data violates an exact invariant (e.g. |a_p| bound)."""


class NonConvergenceError(BsdlabError):
    """Iterative routine hit its depth/iteration guard before the tolerance."""


class NotFoundError(BsdlabError, KeyError):
    """Lookup key (curve label, cache entry) does not exist."""

    def __str__(self) -> str:
        # KeyError reprs its argument; error output wants the plain message.
        return str(self.args[0]) if self.args else ""
