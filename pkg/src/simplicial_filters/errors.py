"""Exception and warning types shared across the package.

Two error families: ``DataError`` for invalid or inconsistent inputs, and
``NumericalError`` for failures inside numerical routines. The CLI maps them
to distinct exit codes. ``IllConditioned`` and ``IncompleteMarket`` are
warnings: the computation still returns a result.
"""
from __future__ import annotations


class DataError(Exception):
    """Invalid, inconsistent, or out-of-contract input data."""


class MissingFace(DataError):
    """A triangle references an edge that is not part of the complex."""


class IndexOutOfRange(DataError):
    """A simplex index lies outside [0, N_k)."""


class UnsupportedOrder(DataError):
    """Requested simplex order is outside the supported range."""


class DimensionMismatch(DataError):
    """A signal, plan, or matrix has the wrong length/shape for the complex."""


class EmptySpec(DataError):
    """A design problem has no target frequencies to fit against."""


class DomainMismatch(DataError):
    """Response curves disagree at frequency 0 where they must coincide."""


class ZeroReference(DataError):
    """NRMSE requested against an all-zero reference signal."""


class NonPositiveRate(DataError):
    """An exchange-rate entry is zero or negative."""


class UnsupportedCombination(DataError):
    """The requested method cannot produce the requested component."""


class NumericalError(Exception):
    """A numerical routine failed to produce a usable result."""


class EigenFailure(NumericalError):
    """The symmetric eigensolver did not converge."""


class SingularSystem(NumericalError):
    """A linear system that should be invertible turned out singular."""


class IllConditioned(UserWarning):
    """A least-squares system is badly conditioned; result still returned."""


class IncompleteMarket(UserWarning):
    """Market is missing pair quotes; a fallback correction path was used."""
