"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: validation errors -> 2, size guards -> 3,
numerical inconsistencies -> 4.
"""


class ZqwalkError(Exception):
    """Base class for all library errors."""


class ValidationError(ZqwalkError):
    """Invalid input: bad probabilities, wrong shapes, broken preconditions."""


class SizeGuardError(ZqwalkError):
    """Requested computation exceeds the configured enumeration guard."""


class NumericalInconsistencyError(ZqwalkError):
    """A numerical self-check failed (imaginary residue, negative mass, ...)."""


class UnsupportedOperationError(ZqwalkError):
    """Operation not available for this variant (e.g. no sampler attached)."""
