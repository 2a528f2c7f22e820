"""Multivariate Krawtchouk polynomials on the uniform multinomial.

Q_l(m) is the coefficient of w^l in the generating function
prod_{j=0}^{q-1} (1 + sum_k w_k theta_k^j)^{m[j]}, extracted by truncated
dense power-series multiplication.  The module also provides the dual
generating function, exact norms, the univariate reduction, reproducing
kernel polynomials (two independent formulas), and hypergroup linearization
coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    enumerate_count_vectors,
    enumerate_multi_indices,
    multinomial_coeff,
    norm_h,
    roots_of_unity,
    stationary_pmf,
    validate_count_vector,
)
from .errors import NumericalInconsistencyError, SizeGuardError, ValidationError

TABLE_GUARD = 10**5


def _series_times_linear(P: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Multiply a truncated series P(w) by (1 + sum_k coeffs[k] * w_k).

    P has one axis per variable; coefficients beyond each axis length are
    dropped (truncation).
    """
    out = P.copy()
    for k, c in enumerate(coeffs):
        sl_to = [slice(None)] * P.ndim
        sl_from = [slice(None)] * P.ndim
        sl_to[k] = slice(1, None)
        sl_from[k] = slice(0, -1)
        out[tuple(sl_to)] += c * P[tuple(sl_from)]
    return out


def mvk_eval(l, m, q: int, perm=None) -> complex:
    """Q_l(m) for a single index, with the series truncated at l per axis.

    perm optionally relabels the nonzero roots theta_k -> theta_{perm[k]}
    (used to verify basis-independence of symmetric functionals).
    """
    l = tuple(int(x) for x in l)
    m = validate_count_vector(m)
    d = sum(m)
    if len(l) != q - 1 or any(x < 0 for x in l) or sum(l) > d:
        raise ValidationError(f"multi-index {l} invalid for q={q}, d={d}")
    theta = roots_of_unity(q)
    order = perm if perm is not None else tuple(range(1, q))
    P = np.zeros(tuple(x + 1 for x in l), dtype=complex)
    P[(0,) * (q - 1)] = 1.0
    for j in range(q):
        coeffs = np.array([theta[(k * j) % q] for k in order])
        for _ in range(m[j]):
            P = _series_times_linear(P, coeffs)
    return complex(P[l])


@dataclass
class MvkTable:
    """Dense table Q[i_l, i_m] over the canonical enumerations."""

    q: int
    d: int
    indices: tuple[tuple[int, ...], ...]
    counts: tuple[tuple[int, ...], ...]
    table: np.ndarray

    def value(self, l, m) -> complex:
        return complex(self.table[self._il[tuple(l)], self._im[tuple(m)]])

    def __post_init__(self):
        self._il = {l: i for i, l in enumerate(self.indices)}
        self._im = {m: i for i, m in enumerate(self.counts)}


def mvk_build(q: int, d: int, perm=None) -> MvkTable:
    """Full table of Q_l(m) for all indices and count vectors."""
    if q < 2 or d < 1:
        raise ValidationError(f"need q >= 2, d >= 1, got q={q}, d={d}")
    n = math.comb(d + q - 1, q - 1)
    if n > TABLE_GUARD:
        raise SizeGuardError(f"table of {n}^2 entries exceeds guard {TABLE_GUARD}^2")
    indices = enumerate_multi_indices(d, q)
    counts = enumerate_count_vectors(d, q)
    theta = roots_of_unity(q)
    order = perm if perm is not None else tuple(range(1, q))
    table = np.empty((len(indices), len(counts)), dtype=complex)
    shape = (d + 1,) * (q - 1)
    for im, m in enumerate(counts):
        P = np.zeros(shape, dtype=complex)
        P[(0,) * (q - 1)] = 1.0
        for j in range(q):
            coeffs = np.array([theta[(k * j) % q] for k in order])
            for _ in range(m[j]):
                P = _series_times_linear(P, coeffs)
        for il, l in enumerate(indices):
            table[il, im] = P[l]
    return MvkTable(q, d, indices, counts, table)


def mvk_dual_eval(l, m, q: int) -> complex:
    """Q_l(m) extracted from the dual generating function.

    (sum_j s_j)^{d-|l|} prod_k (sum_j s_j theta_k^j)^{l_k}
    = sum_m C(d, m) h_l Q_l(m) s^m, a series in q variables s_0..s_{q-1}.
    """
    l = tuple(int(x) for x in l)
    m = validate_count_vector(m)
    d = sum(m)
    if len(l) != q - 1 or sum(l) > d:
        raise ValidationError(f"multi-index {l} invalid for q={q}, d={d}")
    if (d + 1) ** q > TABLE_GUARD * 10:
        raise SizeGuardError("dual series too large")
    theta = roots_of_unity(q)
    P = np.zeros((d + 1,) * q, dtype=complex)
    P[(0,) * q] = 1.0
    ones = np.ones(q, dtype=complex)
    for _ in range(d - sum(l)):
        P = _series_times_homogeneous(P, ones)
    for k in range(1, q):
        row = np.array([theta[(k * j) % q] for j in range(q)])
        for _ in range(l[k - 1]):
            P = _series_times_homogeneous(P, row)
    coeff = P[m]
    return complex(coeff / (float(norm_h(l, d)) * multinomial_coeff(m)))


def _series_times_homogeneous(P: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Multiply by the degree-one form sum_j coeffs[j] * s_j (no constant)."""
    out = np.zeros_like(P)
    for j, c in enumerate(coeffs):
        sl_to = [slice(None)] * P.ndim
        sl_from = [slice(None)] * P.ndim
        sl_to[j] = slice(1, None)
        sl_from[j] = slice(0, -1)
        out[tuple(sl_to)] += c * P[tuple(sl_from)]
    return out


def univariate_k(l: int, m: int, d: int, q: int) -> float:
    """K_l(m; d, q): coefficient of w^l in (1+(q-1)w)^{d-m} (1-w)^m."""
    if not (0 <= l <= d and 0 <= m <= d):
        raise ValidationError(f"need 0 <= l, m <= d, got l={l}, m={m}, d={d}")
    total = 0
    for j in range(max(0, l - m), min(d - m, l) + 1):
        total += (
            math.comb(d - m, j) * (q - 1) ** j * math.comb(m, l - j) * (-1) ** (l - j)
        )
    return float(total)


def scaled_k(l: int, m: int, d: int, q: int) -> float:
    """Q^K_l(m; d, 1-1/q) = C(d,l)^{-1} (q-1)^{-l} K_l(m; d, q)."""
    return univariate_k(l, m, d, q) / (math.comb(d, l) * (q - 1) ** l)


def conditional_reduction(l, m0: int, d: int, q: int) -> float:
    """E[Q_l(M) | M[0] = m0] in closed form:
    (q-1)^{-|l|} (|l| choose l) K_{|l|}(d - m0; d, q)."""
    l = tuple(int(x) for x in l)
    if not 0 <= m0 <= d:
        raise ValidationError(f"need 0 <= m0 <= d, got {m0}")
    L = sum(l)
    if L > d:
        raise ValidationError(f"|l| = {L} exceeds d = {d}")
    return (
        (q - 1) ** (-L) * multinomial_coeff(l) * univariate_k(L, d - m0, d, q)
    )


def rk_poly(L: int, n, m, q: int, d: int, table: MvkTable | None = None) -> float:
    """Reproducing kernel polynomial Q_L(n, m) = sum_{|l|=L} h_l Q_l(m) conj(Q_l(n))."""
    if not 0 <= L <= d:
        raise ValidationError(f"need 0 <= L <= d, got L={L}")
    n = validate_count_vector(n, d)
    m = validate_count_vector(m, d)
    total = 0j
    for l in enumerate_multi_indices(d, q):
        if sum(l) != L:
            continue
        h = float(norm_h(l, d))
        qm = table.value(l, m) if table is not None else mvk_eval(l, m, q)
        qn = table.value(l, n) if table is not None else mvk_eval(l, n, q)
        total += h * qm * np.conj(qn)
    if abs(total.imag) > 1e-7:
        raise NumericalInconsistencyError(
            f"imaginary residue {total.imag:.3e} in kernel polynomial"
        )
    return float(total.real)


def _pmf_frac(w, q: int) -> Fraction:
    return Fraction(multinomial_coeff(w), q ** sum(w))


def rk_overlap(L: int, n, m, q: int, d: int) -> float:
    """Q_L(n, m) by the alternating common-overlap formula
    sum_k (-1)^{L-k} C(d,k) C(d-k,L-k) zeta_k(n,m), where
    p(n) p(m) zeta_k = sum_{|w|=k} p(w) p(n-w) p(m-w)."""
    if not 0 <= L <= d:
        raise ValidationError(f"need 0 <= L <= d, got L={L}")
    n = validate_count_vector(n, d)
    m = validate_count_vector(m, d)
    pn = _pmf_frac(n, q)
    pm = _pmf_frac(m, q)
    total = Fraction(0)
    for k in range(L + 1):
        zsum = Fraction(0)
        for w in enumerate_count_vectors(k, q):
            if all(wj <= nj and wj <= mj for wj, nj, mj in zip(w, n, m)):
                nw = tuple(nj - wj for nj, wj in zip(n, w))
                mw = tuple(mj - wj for mj, wj in zip(m, w))
                zsum += _pmf_frac(w, q) * _pmf_frac(nw, q) * _pmf_frac(mw, q)
        zeta = zsum / (pn * pm)
        total += (-1) ** (L - k) * math.comb(d, k) * math.comb(d - k, L - k) * zeta
    return float(total)


def hypergroup_coeff(m, n, g, q: int, d: int, table: MvkTable | None = None) -> float:
    """Linearization coefficient c(m,n,g) = p(g) sum_l h_l^2 Q_l(m) conj(Q_l(n)) Q_l(g).

    Nonnegative for every triple; a value below -1e-6 indicates an
    implementation bug and raises.
    """
    m = validate_count_vector(m, d)
    n = validate_count_vector(n, d)
    g = validate_count_vector(g, d)
    if table is None:
        table = mvk_build(q, d)
    total = 0j
    for l in table.indices:
        h = float(norm_h(l, d))
        total += h * h * table.value(l, m) * np.conj(table.value(l, n)) * table.value(l, g)
    val = stationary_pmf(g, q) * total
    if abs(val.imag) > 1e-9:
        raise NumericalInconsistencyError(
            f"imaginary residue {val.imag:.3e} in hypergroup coefficient"
        )
    if val.real < -1e-6:
        raise NumericalInconsistencyError(
            f"hypergroup coefficient {val.real:.3e} is negative"
        )
    return float(val.real)
