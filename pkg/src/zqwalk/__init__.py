"""Spectral analysis of long-range random walks on Z_q^d.

Circulant chains on the cycle, product walks on V_{q,d}, multivariate
Krawtchouk expansions for exchangeable increments, grouped count-vector
chains with mixing/cutoff analysis, torus-limit processes, and
large-dimension asymptotics — all validated against brute-force and Monte
Carlo references.
"""

from .errors import (
    NumericalInconsistencyError,
    SizeGuardError,
    UnsupportedOperationError,
    ValidationError,
    ZqwalkError,
)

__version__ = "0.1.0"

__all__ = [
    "ZqwalkError",
    "ValidationError",
    "SizeGuardError",
    "NumericalInconsistencyError",
    "UnsupportedOperationError",
    "__version__",
]
