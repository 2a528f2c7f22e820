"""The grouped chain M_t on count vectors.

When the increment V is exchangeable across coordinates, the occupancy
counts of the walk form a Markov chain whose eigenvalues are
kappa_l = h_l E[Q_l(V)], indexed by multi-indices l.  This module builds
grouped chains, their spectral transition function, chi-squared distance to
stationarity, cutoff/mixing bounds, Hamming-distance marginals, and named
models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    enumerate_count_vectors,
    enumerate_multi_indices,
    norm_h,
    root_of_unity,
    stationary_pmf,
    validate_count_vector,
)
from .errors import NumericalInconsistencyError, ValidationError
from .krawtchouk import mvk_eval, scaled_k
from .product import (
    ExchangeableCountsIncrement,
    ExplicitIncrement,
    IncrementDist,
    hamming_increment,
    left_shift_increment,
    neighbor_increment,
    subset_toggle_increment,
)


@dataclass
class GroupedChain:
    """Count-vector chain with eigenvalues kappa[l] for each multi-index l."""

    q: int
    d: int
    kappa: dict[tuple[int, ...], complex]
    source: IncrementDist | None = None

    def __post_init__(self):
        zero = (0,) * (self.q - 1)
        if zero not in self.kappa or abs(self.kappa[zero] - 1.0) > 1e-10:
            raise ValidationError("kappa at the zero index must equal 1")
        if any(abs(v) > 1 + 1e-10 for v in self.kappa.values()):
            raise ValidationError("grouped eigenvalue modulus exceeds 1")

    def kappa_at(self, l) -> complex:
        return self.kappa.get(tuple(l), 0.0 + 0j)


def kappa_from_increment(incr: IncrementDist, l) -> complex:
    """kappa_l = h_l E[Q_l(V)] over the count-vector law of V."""
    if not incr.is_exchangeable():
        raise ValidationError("grouped eigenvalues require an exchangeable increment")
    l = tuple(int(x) for x in l)
    d, q = incr.d, incr.q
    if sum(l) > d:
        raise ValidationError(f"|l| = {sum(l)} exceeds d = {d}")
    h = float(norm_h(l, d))
    total = 0j
    for counts, w in incr.count_law().items():
        if w:
            total += w * mvk_eval(l, counts, q)
    return h * total


def grouped_from_increment(incr: IncrementDist) -> GroupedChain:
    kappa = {
        l: kappa_from_increment(incr, l)
        for l in enumerate_multi_indices(incr.d, incr.q)
    }
    return GroupedChain(incr.q, incr.d, kappa, source=incr)


def grouped_transition(chain: GroupedChain, m, n) -> float:
    """P(M_{t+1} = n | M_t = m) = p(n) {1 + sum_{l != 0} kappa_l h_l Q_l(m) conj(Q_l(n))}."""
    q, d = chain.q, chain.d
    m = validate_count_vector(m, d)
    n = validate_count_vector(n, d)
    total = 1.0 + 0j
    for l in enumerate_multi_indices(d, q):
        if sum(l) == 0:
            continue
        k = chain.kappa_at(l)
        if k == 0:
            continue
        h = float(norm_h(l, d))
        total += k * h * mvk_eval(l, m, q) * np.conj(mvk_eval(l, n, q))
    val = stationary_pmf(n, q) * total
    if abs(val.imag) > 1e-8:
        raise NumericalInconsistencyError(
            f"imaginary residue {val.imag:.3e} in grouped transition"
        )
    if val.real < -1e-6:
        raise NumericalInconsistencyError(
            f"grouped transition entry {val.real:.3e} < 0: kappa is not a valid "
            "eigenvalue sequence"
        )
    return float(max(0.0, val.real))


def grouped_matrix(chain: GroupedChain) -> tuple[np.ndarray, tuple]:
    """Full transition matrix over the canonical count-vector enumeration."""
    states = enumerate_count_vectors(chain.d, chain.q)
    P = np.empty((len(states), len(states)))
    for i, m in enumerate(states):
        for j, n in enumerate(states):
            P[i, j] = grouped_transition(chain, m, n)
    return P, states


def chi_squared(chain: GroupedChain, m, t: int) -> float:
    """Chi-squared distance to stationarity after t steps from state m:
    sum_{l != 0} |kappa_l|^{2t} h_l |Q_l(m)|^2."""
    if t < 0:
        raise ValidationError(f"t must be >= 0, got {t}")
    q, d = chain.q, chain.d
    m = validate_count_vector(m, d)
    m0 = (d,) + (0,) * (q - 1)
    total = 0.0
    for l, k in chain.kappa.items():
        if sum(l) == 0:
            continue
        mod = abs(k)
        if mod == 0 and t > 0:
            continue
        h = float(norm_h(l, d))
        if m == m0:
            # Q_l(m_0) = h_l^{-1}, so h_l |Q_l|^2 = h_l^{-1} without a table.
            weight = 1.0 / h
        else:
            weight = h * abs(mvk_eval(l, m, q)) ** 2
        total += mod ** (2 * t) * weight
    return total


def subset_toggle_kappa(A: int, d: int, L: int) -> float:
    """Degree-only eigenvalue of the A-subset toggle model:
    sum_n (-1)^n C(L,n) C(d-L,A-n) / C(d,A)."""
    if not (0 <= A <= d and 0 <= L <= d):
        raise ValidationError(f"need 0 <= A, L <= d, got A={A}, L={L}, d={d}")
    total = sum(
        (-1) ** n * math.comb(L, n) * math.comb(d - L, A - n)
        for n in range(max(0, A - (d - L)), min(L, A) + 1)
    )
    return total / math.comb(d, A)


def subset_toggle_chain(q: int, d: int, A: int) -> GroupedChain:
    """Grouped chain with the closed-form toggle eigenvalues, supported on
    degrees |l| <= A."""
    kappa = {}
    for l in enumerate_multi_indices(d, q):
        L = sum(l)
        kappa[l] = subset_toggle_kappa(A, d, L) if L <= A else 0.0
    return GroupedChain(q, d, kappa, source=subset_toggle_increment(q, d, A))


def left_shift_chain(q: int, d: int) -> GroupedChain:
    """One uniformly chosen coordinate shifts by +1:
    kappa_l = (1/d) sum_j l+_j theta_j with l+ = (d-|l|, l)."""
    kappa = {}
    for l in enumerate_multi_indices(d, q):
        lp = (d - sum(l),) + l
        kappa[l] = sum(
            lj * root_of_unity(q, j) for j, lj in enumerate(lp)
        ) / d
    return GroupedChain(q, d, kappa, source=left_shift_increment(q, d))


def neighbor_chain(q: int, d: int) -> GroupedChain:
    """One uniformly chosen coordinate moves +1 or -1 equally:
    kappa_l = (1/d) sum_j l+_j cos(2 pi j / q)."""
    kappa = {}
    for l in enumerate_multi_indices(d, q):
        lp = (d - sum(l),) + l
        kappa[l] = sum(
            lj * math.cos(2 * math.pi * j / q) for j, lj in enumerate(lp)
        ) / d
    return GroupedChain(q, d, kappa, source=neighbor_increment(q, d))


def hamming_chain(q: int, d: int, qh) -> GroupedChain:
    """Hamming model: kappa_l = sum_h q_h Q^K_h(|l|; d, 1-1/q)."""
    qh = [float(x) for x in qh]
    if len(qh) != d + 1 or any(x < 0 for x in qh) or abs(sum(qh) - 1) > 1e-12:
        raise ValidationError("q_h must be a probability vector of length d+1")
    by_degree = [
        sum(w * scaled_k(h, L, d, q) for h, w in enumerate(qh) if w)
        for L in range(d + 1)
    ]
    kappa = {l: by_degree[sum(l)] for l in enumerate_multi_indices(d, q)}
    return GroupedChain(q, d, kappa, source=hamming_increment(q, d, qh))


def cutoff_time(d: int, q: int, frac: float) -> float:
    """t_cutoff = log(d (q-1)) / (4 K) for per-coordinate change rate K."""
    if not 0 < frac <= 0.5:
        raise ValidationError(f"rate must be in (0, 1/2], got {frac}")
    return math.log(d * (q - 1)) / (4 * frac)


def chi_squared_bounds(d: int, q: int, frac: float, t: float) -> tuple[float, float]:
    """(lower, upper) envelope for chi-squared at the all-zero start:
    d(q-1)(1-2K)^{2t} <= chi^2_t(m_0) <= e^{d(q-1)e^{-4Kt}} - 1."""
    if not 0 < frac <= 0.5:
        raise ValidationError(f"rate must be in (0, 1/2], got {frac}")
    lower = d * (q - 1) * (1 - 2 * frac) ** (2 * t)
    upper = math.exp(d * (q - 1) * math.exp(-4 * frac * t)) - 1
    return lower, upper


def mixing_bounds(gamma, d: int, q: int, eps: float) -> tuple[float, float]:
    """Mixing-time bracket for the single-coordinate jump model with jump
    sizes c = 1..q-1 taken with rates gamma[c]."""
    gamma = [float(x) for x in gamma]
    if len(gamma) != q - 1 or any(x < 0 for x in gamma):
        raise ValidationError("gamma must be a nonnegative vector of length q-1")
    g = sum(gamma)
    if g > 1 + 1e-12:
        raise ValidationError(f"|gamma| = {g} exceeds 1")
    if eps < 0:
        raise ValidationError("eps must be >= 0")
    cos_sums = [
        sum(gamma[c - 1] * math.cos(2 * math.pi * c * k / q) for c in range(1, q))
        for k in range(1, q)
    ]
    m_hi, m_lo = max(cos_sums), min(cos_sums)
    if g - m_hi <= 0:
        raise ValidationError(
            "no mixing bound: the spectral gap |gamma| - max_k cosine sum is not positive"
        )
    log_term = math.log(d * (q - 1) / (1 + eps))
    return log_term / (2 * (g - m_lo)), log_term / (2 * (g - m_hi))


def hamming_marginal(model, t: int, q: int | None = None, d: int | None = None) -> np.ndarray:
    """Distribution of the Hamming distance from the all-zero start after t steps.

    `model` is either a q_h vector (length d+1; q and d required) or a
    GroupedChain whose eigenvalues depend on l only through |l|.
    """
    if t < 1:
        raise ValidationError(f"t must be >= 1, got {t}")
    if isinstance(model, GroupedChain):
        q, d = model.q, model.d
        by_degree = [0.0] * (d + 1)
        seen = [False] * (d + 1)
        for l, k in model.kappa.items():
            L = sum(l)
            if seen[L]:
                if abs(k - by_degree[L]) > 1e-10:
                    raise ValidationError(
                        "chain eigenvalues do not depend on |l| only; "
                        "no Hamming marginal"
                    )
            else:
                by_degree[L], seen[L] = k, True
        kappa_L = by_degree
    else:
        if q is None or d is None:
            raise ValidationError("q and d required with a q_h vector")
        chain = hamming_chain(q, d, model)
        kappa_L = [chain.kappa_at((L,) + (0,) * (q - 2)) for L in range(d + 1)]

    probs = np.empty(d + 1)
    for dist in range(d + 1):
        base = (
            math.comb(d, dist) * (1 - 1 / q) ** dist * (1 / q) ** (d - dist)
        )
        series = 1.0
        for L in range(1, d + 1):
            gamma_t = (q - 1) ** L * kappa_L[L] ** t
            series += (gamma_t * math.comb(d, L) * scaled_k(L, dist, d, q)).real
        probs[dist] = base * series
    if probs.min() < -1e-6:
        raise ValidationError(
            f"Hamming marginal has mass {probs.min():.3e} < 0: model is not "
            "a valid distance chain"
        )
    if abs(probs.sum() - 1.0) > 1e-8:
        raise NumericalInconsistencyError(
            f"Hamming marginal sums to {probs.sum():.12f}"
        )
    return np.clip(probs, 0.0, None)


def _patterns_by_mask(incr: IncrementDist):
    """Group enumerated support by the set of nonzero coordinates."""
    groups: dict[tuple[int, ...], dict[tuple[int, ...], float]] = {}
    for v, w in incr.support_items():
        mask = tuple(i for i, c in enumerate(v) if c != 0)
        groups.setdefault(mask, {})[v] = groups.setdefault(mask, {}).get(v, 0.0) + w
    return groups


def is_hamming_markovian(incr: IncrementDist, tol: float = 1e-12) -> bool:
    """True iff, given which coordinates change, every assignment of nonzero
    values is equally likely (so the Hamming distance is Markovian)."""
    q = incr.q
    groups = _patterns_by_mask(incr)
    for mask, pats in groups.items():
        h = len(mask)
        weights = list(pats.values())
        ref = weights[0]
        if any(abs(w - ref) > tol for w in weights):
            return False
        # All (q-1)^h value assignments over this mask must carry the same
        # mass; patterns absent from the support have zero mass.
        if len(pats) != (q - 1) ** h and ref > tol:
            return False
    return True


def uniformize_nonzero(incr: IncrementDist) -> IncrementDist:
    """Redistribute mass uniformly over nonzero values within each pattern of
    changed coordinates; the law of the zero-pattern itself is unchanged."""
    q, d = incr.q, incr.d
    groups = _patterns_by_mask(incr)
    if incr.is_exchangeable():
        # Stay in count-vector form: mass with h changes spreads evenly over
        # the C(d,h)(q-1)^h vectors, i.e. over counts c proportionally to the
        # number of vectors with counts c.
        mass_by_h: dict[int, float] = {}
        for counts, w in incr.count_law().items():
            h = d - counts[0]
            mass_by_h[h] = mass_by_h.get(h, 0.0) + w
        law: dict[tuple[int, ...], float] = {}
        for h, w in mass_by_h.items():
            if w <= 0:
                continue
            denom = math.comb(d, h) * (q - 1) ** h
            for c in enumerate_count_vectors(h, q - 1) if q > 2 else [(h,)]:
                counts = (d - h,) + c
                from .core import multinomial_coeff

                law[counts] = law.get(counts, 0.0) + w * multinomial_coeff(counts) / denom
        return ExchangeableCountsIncrement(law, q, d)
    support: dict[tuple[int, ...], float] = {}
    for mask, pats in groups.items():
        h = len(mask)
        mass = sum(pats.values())
        if mass <= 0:
            continue
        per = mass / (q - 1) ** h
        for values in np.ndindex(*(q - 1,) * h):
            v = [0] * d
            for pos, val in zip(mask, values):
                v[pos] = val + 1
            key = tuple(v)
            support[key] = support.get(key, 0.0) + per
    return ExplicitIncrement(list(support.items()), q, d)


def definetti_kappa(mixture, l, q: int) -> complex:
    """Grouped eigenvalues of a de Finetti walk with a discrete mixing
    measure: sum over components of weight * prod_k (sum_j theta_1^{kj} p[j])^{l_k}."""
    l = tuple(int(x) for x in l)
    total = 0j
    weights = []
    for weight, p in mixture:
        weights.append(float(weight))
        p = [float(x) for x in p]
        if len(p) != q or any(x < 0 for x in p) or abs(sum(p) - 1) > 1e-12:
            raise ValidationError(f"component {p} is not a probability vector on V_q")
        term = 1.0 + 0j
        for k in range(1, q):
            inner = sum(root_of_unity(q, k * j) * p[j] for j in range(q))
            term *= inner ** l[k - 1]
        total += weight * term
    if any(w < 0 for w in weights) or abs(sum(weights) - 1) > 1e-12:
        raise ValidationError("mixture weights must be a probability vector")
    return total
