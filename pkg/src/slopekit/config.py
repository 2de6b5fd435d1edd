"""Global numeric tolerance.

All approximate comparisons in the package go through a single absolute
tolerance.  The default is 1e-9 and can be overridden with the
SLOPEKIT_TOL environment variable.
"""

import os

from .errors import ParameterError

DEFAULT_TOL = 1e-9


def get_tol() -> float:
    raw = os.environ.get("SLOPEKIT_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise ParameterError(f"SLOPEKIT_TOL is not a number: {raw!r}")
    if tol <= 0:
        raise ParameterError(f"SLOPEKIT_TOL must be positive, got {tol}")
    return tol


def resolve_tol(tol=None) -> float:
    """Return the explicit tolerance if given, the global one otherwise."""
    return get_tol() if tol is None else float(tol)
