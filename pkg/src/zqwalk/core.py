"""Cyclic-group arithmetic and combinatorial enumeration on Z_q^d.

Everything downstream (eigenvalue tables, Krawtchouk polynomials, grouped
chains) indexes into the enumerations defined here, so the orderings are part
of the public contract:

* count vectors: ascending lexicographic;
* multi-indices: by total degree, lexicographic within a degree.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import SizeGuardError, ValidationError

# Hard cap on enumeration cardinality; beyond this, callers must simulate.
ENUMERATION_GUARD = 10**7


@lru_cache(maxsize=None)
def roots_of_unity(q: int) -> np.ndarray:
    """Table of the q-th roots of unity, theta_k = exp(2*pi*i*k/q).

    Precomputed once per q so repeated transcendental calls cannot introduce
    drift between eigenvalue tables built at different times.
    """
    if q < 2:
        raise ValidationError(f"modulus must be >= 2, got {q}")
    return np.exp(2j * np.pi * np.arange(q) / q)


def root_of_unity(q: int, k: int) -> complex:
    """exp(2*pi*i*(k mod q)/q)."""
    return complex(roots_of_unity(q)[k % q])


def _check_enumeration_size(d: int, q: int) -> int:
    n = math.comb(d + q - 1, q - 1)
    if n > ENUMERATION_GUARD:
        raise SizeGuardError(
            f"enumeration of {n} vectors exceeds guard {ENUMERATION_GUARD}"
        )
    return n


@lru_cache(maxsize=None)
def enumerate_count_vectors(d: int, q: int) -> tuple[tuple[int, ...], ...]:
    """All length-q nonnegative integer vectors summing to d, lexicographic.

    Cardinality C(d+q-1, q-1).
    """
    if d < 0 or q < 2:
        raise ValidationError(f"need d >= 0 and q >= 2, got d={d}, q={q}")
    _check_enumeration_size(d, q)

    def rec(remaining: int, slots: int):
        if slots == 1:
            yield (remaining,)
            return
        for first in range(remaining + 1):
            for rest in rec(remaining - first, slots - 1):
                yield (first,) + rest

    return tuple(rec(d, q))


@lru_cache(maxsize=None)
def enumerate_multi_indices(d: int, q: int) -> tuple[tuple[int, ...], ...]:
    """All length-(q-1) indices l with |l| <= d, by degree then lexicographic.

    Includes the zero index first; cardinality C(d+q-1, q-1).
    """
    if d < 0 or q < 2:
        raise ValidationError(f"need d >= 0 and q >= 2, got d={d}, q={q}")
    _check_enumeration_size(d, q)

    def rec(total: int, slots: int):
        if slots == 0:
            if total == 0:
                yield ()
            return
        for first in range(total + 1):
            for rest in rec(total - first, slots - 1):
                yield (first,) + rest

    out = []
    for degree in range(d + 1):
        out.extend(rec(degree, q - 1))
    return tuple(out)


def validate_count_vector(m, d: int | None = None) -> tuple[int, ...]:
    m = tuple(int(x) for x in m)
    if any(x < 0 for x in m):
        raise ValidationError(f"count vector has negative entry: {m}")
    if d is not None and sum(m) != d:
        raise ValidationError(f"count vector {m} does not sum to d={d}")
    return m


def multinomial_coeff(m) -> int:
    """d! / prod(m[j]!), exact."""
    m = validate_count_vector(m)
    out = math.factorial(sum(m))
    for x in m:
        out //= math.factorial(x)
    return out


def stationary_pmf(m, q: int) -> float:
    """Uniform-multinomial mass p(m) = (d choose m) * q^(-d)."""
    m = validate_count_vector(m)
    d = sum(m)
    return float(Fraction(multinomial_coeff(m), q**d))


def norm_h(l, d: int) -> Fraction:
    """Inverse squared norm h_l of the degree-l polynomial, exact.

    h_l^{-1} = d! / ((d-|l|)! * l_1! * ... * l_{q-1}!).
    """
    l = tuple(int(x) for x in l)
    total = sum(l)
    if any(x < 0 for x in l) or total > d:
        raise ValidationError(f"multi-index {l} invalid for d={d}")
    inv = math.factorial(d) // math.factorial(d - total)
    for x in l:
        inv //= math.factorial(x)
    return Fraction(1, inv)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, int(math.isqrt(n)) + 1):
        if n % p == 0:
            return False
    return True
