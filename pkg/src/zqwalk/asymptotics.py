"""Large-dimension limits of the Krawtchouk spectral machinery.

As d grows, h_l Q_l evaluated at count vectors with fixed fractions tends to
a product of linear forms; rescaled polynomials at multinomial fluctuations
tend to a biorthogonal Gaussian system built from Hermite-type polynomials
with variance 1/q.  This module implements the limit objects, the limit
transition density, and Monte Carlo orthogonality checks.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .core import root_of_unity, roots_of_unity
from .errors import SizeGuardError, ValidationError

SERIES_DEGREE_CAP = 12
DENSITY_DEGREE_CAP = 8


def _validate_fractions(z, q: int) -> tuple[float, ...]:
    z = tuple(float(x) for x in z)
    if len(z) != q - 1 or any(x < 0 for x in z):
        raise ValidationError(f"need a nonnegative length-{q - 1} fraction vector")
    if sum(z) > 1 + 1e-12:
        raise ValidationError(f"fractions sum to {sum(z)} > 1")
    return z


def mvk_limit(z, l, q: int) -> complex:
    """Limit of h_l Q_l(n) when n[j]/d -> z[j] for j >= 1:
    prod_k (1 - |z| + sum_j z[j] theta_k^j)^{l_k}."""
    z = _validate_fractions(z, q)
    l = tuple(int(x) for x in l)
    theta = roots_of_unity(q)
    out = 1.0 + 0j
    for k in range(1, q):
        inner = 1 - sum(z) + sum(z[j - 1] * theta[(k * j) % q] for j in range(1, q))
        out *= inner ** l[k - 1]
    return out


def rk_limit(xi, eta, L: int, q: int) -> float:
    """Limit of C(d,L)^{-1} (q-1)^{-L}-normalized kernel polynomials:
    (q (1-|xi|)(1-|eta|) + q sum_j xi[j] eta[j] - 1)^L."""
    xi = _validate_fractions(xi, q)
    eta = _validate_fractions(eta, q)
    if L < 0:
        raise ValidationError("L must be >= 0")
    base = (
        q * (1 - sum(xi)) * (1 - sum(eta))
        + q * sum(x * y for x, y in zip(xi, eta))
        - 1
    )
    return float(base**L)


def hermite_chebycheff(k: int, x: float, q: int) -> float:
    """H_k(x; q), orthogonal for N(0, 1/q), by the three-term recurrence
    H_{k+1} = x H_k - (k/q) H_{k-1} with H_0 = 1, H_1 = x."""
    if k < 0:
        raise ValidationError("k must be >= 0")
    if k == 0:
        return 1.0
    prev, cur = 1.0, x
    for j in range(1, k):
        prev, cur = cur, x * cur - (j / q) * prev
    return cur


def _validate_gaussian_coord(m, q: int) -> tuple[float, ...]:
    m = tuple(float(x) for x in m)
    if len(m) != q:
        raise ValidationError(f"coordinate vector must have length q={q}")
    if abs(sum(m)) > 1e-12:
        raise ValidationError(f"coordinates sum to {sum(m)}, not 0")
    return m


@lru_cache(maxsize=None)
def _gaussian_pairing_coeffs(q: int, cap: int) -> dict[tuple[int, ...], complex]:
    """Coefficients of exp{-1/2 sum_k w_k w_{q-k}} as a truncated series in w.

    Returned as multi-index -> coefficient for total degree <= cap.
    """
    # The exponent A(w) = -1/2 sum_{k=1}^{q-1} w_k w_{q-k} is a quadratic
    # form; exp(A) = sum_n A^n / n!.
    terms: dict[tuple[int, ...], complex] = {}
    for k in range(1, q):
        idx = [0] * (q - 1)
        idx[k - 1] += 1
        idx[(q - k) - 1] += 1
        key = tuple(idx)
        terms[key] = terms.get(key, 0.0) - 0.5
    out: dict[tuple[int, ...], complex] = {(0,) * (q - 1): 1.0 + 0j}
    power: dict[tuple[int, ...], complex] = dict(out)
    for n in range(1, cap // 2 + 1):
        new: dict[tuple[int, ...], complex] = {}
        for idx_a, ca in power.items():
            for idx_t, ct in terms.items():
                idx = tuple(a + b for a, b in zip(idx_a, idx_t))
                if sum(idx) <= cap:
                    new[idx] = new.get(idx, 0.0) + ca * ct
        power = new
        fact = math.factorial(n)
        for idx, c in power.items():
            out[idx] = out.get(idx, 0.0) + c / fact
    return out


def mvk_clt(m, l, q: int) -> complex:
    """Limit polynomial Q_l(m; infinity): coefficient of w^l in
    exp{-1/2 sum_k w_k w_{q-k} + sum_k w_k c_k} with c_k = sum_j m[j] theta_k^j."""
    m = _validate_gaussian_coord(m, q)
    l = tuple(int(x) for x in l)
    if len(l) != q - 1 or any(x < 0 for x in l):
        raise ValidationError(f"invalid multi-index {l}")
    if sum(l) > SERIES_DEGREE_CAP:
        raise SizeGuardError(f"|l| = {sum(l)} exceeds series cap {SERIES_DEGREE_CAP}")
    c = [
        sum(m[j] * root_of_unity(q, k * j) for j in range(q)) for k in range(1, q)
    ]
    pairing = _gaussian_pairing_coeffs(q, sum(l))
    # exp(sum w_k c_k) contributes c_k^{b_k} / b_k! at index b; combine with
    # the quadratic pairing part at index a where a + b = l.
    total = 0j
    for a, coeff in pairing.items():
        if any(ak > lk for ak, lk in zip(a, l)):
            continue
        term = coeff
        for k in range(q - 1):
            b = l[k] - a[k]
            term *= c[k] ** b / math.factorial(b)
        total += term
    return total


def mvk_clt_hermite(m, l, q: int) -> complex:
    """Cross-check route for mvk_clt via the explicit Hermite double sum:
    (1 / prod_k l_k!) sum_{|a|=|l|, a in N^q} prod_j H_{a[j]}(m[j]; q)
    * Q_{a+}((0, l); |l|)."""
    from .core import enumerate_count_vectors
    from .krawtchouk import mvk_eval

    m = _validate_gaussian_coord(m, q)
    l = tuple(int(x) for x in l)
    L = sum(l)
    if L > SERIES_DEGREE_CAP:
        raise SizeGuardError(f"|l| = {L} exceeds series cap {SERIES_DEGREE_CAP}")
    denom = 1
    for lk in l:
        denom *= math.factorial(lk)
    if L == 0:
        return 1.0 + 0j
    arg = (0,) + l  # count vector of dimension |l| with nothing at value 0
    total = 0j
    for a in enumerate_count_vectors(L, q):
        h_prod = 1.0
        for j in range(q):
            h_prod *= hermite_chebycheff(a[j], m[j], q)
        total += h_prod * mvk_eval(a[1:], arg, q)
    return total / denom


def _clt_poly_coeffs(q: int, l: tuple[int, ...]):
    """Q_l as a polynomial in the character sums c_1..c_{q-1}: list of
    (exponents b, coefficient)."""
    pairing = _gaussian_pairing_coeffs(q, sum(l))
    out = []
    for a, coeff in pairing.items():
        if any(ak > lk for ak, lk in zip(a, l)):
            continue
        b = tuple(lk - ak for lk, ak in zip(l, a))
        denom = 1
        for bk in b:
            denom *= math.factorial(bk)
        out.append((b, coeff / denom))
    return out


def sample_gaussian_coordinates(q: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """n draws of the singular Gaussian with covariance (1/q)(delta_ab - 1/q):
    centered i.i.d. N(0, 1/q) coordinates."""
    x = rng.normal(scale=1.0 / math.sqrt(q), size=(n, q))
    return x - x.mean(axis=1, keepdims=True)


def clt_orthogonality_check(q: int, lmax: int, n_mc: int, seed: int) -> float:
    """Monte Carlo check of E[Q_l conj(Q_l')] = delta_{ll'} / prod l_k! over
    all pairs with |l|, |l'| <= lmax; returns the max absolute deviation."""
    if n_mc < 10**5:
        raise ValidationError("need at least 1e5 Monte Carlo samples")
    rng = np.random.default_rng(seed)
    samples = sample_gaussian_coordinates(q, n_mc, rng)
    theta = roots_of_unity(q)
    # c[k-1] per sample, vectorized: c_k = sum_j m[j] theta_k^j.
    cs = np.stack(
        [samples @ theta ** k for k in range(1, q)], axis=1
    )  # (n, q-1)
    indices = [
        l
        for l in np.ndindex(*(lmax + 1,) * (q - 1))
        if sum(l) <= lmax
    ]
    values = {}
    for l in indices:
        coeffs = _clt_poly_coeffs(q, tuple(l))
        acc = np.zeros(n_mc, dtype=complex)
        for b, coeff in coeffs:
            term = np.full(n_mc, coeff, dtype=complex)
            for k, bk in enumerate(b):
                if bk:
                    term = term * cs[:, k] ** bk
            acc += term
        values[tuple(l)] = acc
    max_dev = 0.0
    for l in indices:
        for lp in indices:
            emp = np.mean(values[tuple(l)] * np.conj(values[tuple(lp)]))
            denom = 1
            for lk in l:
                denom *= math.factorial(lk)
            target = (1.0 / denom) if tuple(l) == tuple(lp) else 0.0
            max_dev = max(max_dev, abs(emp - target))
    return float(max_dev)


def singular_gaussian_density(n_plus, q: int) -> float:
    """Density of the reduced coordinates (entries 1..q-1) of the limit
    Gaussian: q^{q/2} (2 pi)^{-(q-1)/2} exp{-(q/2) sum_{ab} (delta_ab + 1) n_a n_b}."""
    n_plus = tuple(float(x) for x in n_plus)
    if len(n_plus) != q - 1:
        raise ValidationError(f"reduced coordinates must have length q-1={q - 1}")
    quad = sum(
        (1.0 + (1.0 if a == b else 0.0)) * n_plus[a] * n_plus[b]
        for a in range(q - 1)
        for b in range(q - 1)
    )
    return (
        q ** (q / 2) / (2 * math.pi) ** ((q - 1) / 2) * math.exp(-q / 2 * quad)
    )


def clt_transition_density(m, n, v, q: int, lmax: int) -> float:
    """Limit transition density at fluctuation coordinates m -> n with
    increment fractions v, truncated at total degree lmax."""
    if lmax > DENSITY_DEGREE_CAP:
        raise SizeGuardError(f"lmax = {lmax} exceeds cap {DENSITY_DEGREE_CAP}")
    m = _validate_gaussian_coord(m, q)
    n = _validate_gaussian_coord(n, q)
    v = _validate_fractions(v, q)
    series = 1.0 + 0j
    for l in np.ndindex(*(lmax + 1,) * (q - 1)):
        L = sum(l)
        if L == 0 or L > lmax:
            continue
        eig = mvk_limit(v, l, q)
        if eig == 0:
            continue
        fact = 1
        for lk in l:
            fact *= math.factorial(lk)
        series += eig * fact * mvk_clt(m, l, q) * np.conj(mvk_clt(n, l, q))
    if abs(series.imag) > 1e-9 * max(1.0, abs(series.real)):
        raise ValidationError(f"imaginary residue {series.imag:.3e} in density")
    return singular_gaussian_density(n[1:], q) * series.real
