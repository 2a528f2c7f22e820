"""One-dimensional circulant random walks on Z_q.

A walk X_{t+1} = X_t + V mod q has a circulant transition matrix whose
eigenvalues are the character expectations eta_r = E[theta_r^V].  This module
builds the matrix, computes and inverts the eigenvalue table, and provides
ergodicity checks via two independent mechanisms (a sufficient condition for
reversible walks, and an exact support/aperiodicity analysis).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import is_prime, roots_of_unity
from .errors import NumericalInconsistencyError, ValidationError

PROB_TOL = 1e-12
NEG_TOL = 1e-8


@dataclass(frozen=True)
class IncrementLaw1D:
    """Law of the additive increment V on {0, ..., q-1}."""

    v: tuple[float, ...]

    def __post_init__(self):
        if len(self.v) < 2:
            raise ValidationError("increment law needs q >= 2 entries")
        if any(p < 0 for p in self.v):
            raise ValidationError(f"negative probability in {self.v}")
        if abs(sum(self.v) - 1.0) > PROB_TOL:
            raise ValidationError(f"probabilities sum to {sum(self.v)}, not 1")

    @property
    def q(self) -> int:
        return len(self.v)

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        q = self.q
        return all(abs(self.v[j] - self.v[(q - j) % q]) <= tol for j in range(q))


@dataclass(frozen=True)
class EigenTable1D:
    """eta_r = E[theta_r^V] for r = 0, ..., q-1."""

    eta: tuple[complex, ...]

    def __post_init__(self):
        if abs(self.eta[0] - 1.0) > 1e-12:
            raise ValidationError(f"eta[0] = {self.eta[0]}, expected 1")
        if any(abs(e) > 1 + 1e-12 for e in self.eta):
            raise ValidationError("eigenvalue modulus exceeds 1")

    @property
    def q(self) -> int:
        return len(self.eta)


def build_circulant(law: IncrementLaw1D) -> np.ndarray:
    """q x q matrix with entry (a, b) = v[(b - a) mod q]."""
    q = law.q
    v = np.asarray(law.v)
    idx = (np.arange(q)[None, :] - np.arange(q)[:, None]) % q
    return v[idx]


def eigenvalues_1d(law: IncrementLaw1D) -> EigenTable1D:
    """eta_r = sum_l v_l theta_r^l."""
    q = law.q
    theta = roots_of_unity(q)
    powers = theta[:, None] ** np.arange(q)[None, :]  # powers[r, l] = theta_r^l
    eta = powers @ np.asarray(law.v)
    eta[0] = 1.0
    return EigenTable1D(tuple(eta))


def spectral_transition_1d(eta: EigenTable1D, a: int, b: int) -> float:
    """P_ab = (1/q) sum_r eta_r theta_r^a conj(theta_r^b), clamped to [0, 1]."""
    q = eta.q
    theta = roots_of_unity(q)
    val = sum(eta.eta[r] * theta[r] ** a * np.conj(theta[r] ** b) for r in range(q)) / q
    if abs(val.imag) > 1e-8:
        raise NumericalInconsistencyError(
            f"imaginary residue {val.imag:.3e} in spectral transition"
        )
    return float(min(1.0, max(0.0, val.real)))


def recover_increment(eta: EigenTable1D) -> IncrementLaw1D:
    """Invert the Fourier transform: v_j = (1/q) sum_r eta_r conj(theta_r^j).

    Rejects sequences that are not character expectations of any law
    (negative mass beyond round-off, or mass not summing to 1); small
    round-trip noise is clamped and renormalized.
    """
    q = eta.q
    theta = roots_of_unity(q)
    eta_arr = np.asarray(eta.eta)
    v = np.array(
        [np.sum(eta_arr * np.conj(theta ** j)) / q for j in range(q)]
    )
    if np.max(np.abs(v.imag)) > NEG_TOL:
        raise ValidationError("eigenvalue sequence yields complex probabilities")
    v = v.real
    if v.min() < -NEG_TOL or abs(v.sum() - 1.0) > NEG_TOL:
        raise ValidationError(
            "not a valid eigenvalue sequence: recovered mass "
            f"min={v.min():.3e}, sum={v.sum():.12f}"
        )
    v = np.clip(v, 0.0, None)
    v = v / v.sum()
    return IncrementLaw1D(tuple(v))


def symmetrize(law: IncrementLaw1D) -> IncrementLaw1D:
    """Law of (V - V') mod q for independent copies V, V' of the increment."""
    q = law.q
    out = np.zeros(q)
    for j, pj in enumerate(law.v):
        for k, pk in enumerate(law.v):
            out[(j - k) % q] += pj * pk
    return IncrementLaw1D(tuple(out))


def is_ergodic_sufficient(law: IncrementLaw1D) -> bool:
    """Sufficient condition for a reversible (symmetric) walk to be ergodic.

    True iff q is an odd prime, or q = 2 with v_0 > 0; the do-nothing walk
    v_0 = 1 is excluded.  Asymmetric laws are outside the reversible case
    covered here and are rejected.
    """
    if not law.is_symmetric():
        raise ValidationError("sufficient condition applies to symmetric laws only")
    if law.v[0] >= 1.0 - PROB_TOL:
        return False
    q = law.q
    if q == 2:
        return law.v[0] > 0
    return is_prime(q)


def _support_subgroup_ergodic(q: int, support: list[int]) -> bool:
    # Irreducible iff the support generates all of Z_q, i.e. gcd(support, q) = 1.
    g = q
    for s in support:
        g = math.gcd(g, s)
    if g != 1:
        return False
    # Period of state 0 = gcd of lengths of positive-probability return cycles.
    # Sums of t support elements hit 0 mod q; track achievable multisets by
    # walking the reachable-set sequence until the period gcd stabilizes.
    reachable = {0}
    period = 0
    seen_states: dict[frozenset, int] = {}
    for t in range(1, 4 * q * q + 1):
        reachable = {(a + s) % q for a in reachable for s in support}
        if 0 in reachable:
            period = math.gcd(period, t) if period else t
            if period == 1:
                return True
        key = frozenset(reachable)
        if key in seen_states:
            break
        seen_states[key] = t
    return period == 1


def is_ergodic_direct(law: IncrementLaw1D) -> bool:
    """Exact ergodicity of the additive walk generated by support(V).

    Two independent mechanisms guard each other: an exact subgroup/period
    analysis of the support decides the answer, and matrix-power convergence
    (threshold 1e-8, cap 10*q^2 steps) must not contradict it.
    """
    q = law.q
    support = [j for j, p in enumerate(law.v) if p > 0]
    exact = _support_subgroup_ergodic(q, support)

    P = build_circulant(law)
    M = np.eye(q)
    converged = False
    for _ in range(10 * q * q):
        M = M @ P
        if np.max(np.abs(M - 1.0 / q)) < 1e-8:
            converged = True
            break
    if converged and not exact:
        raise NumericalInconsistencyError(
            "support analysis says non-ergodic but matrix powers converged"
        )
    return exact


# Named one-dimensional laws.


def shift_law(q: int) -> IncrementLaw1D:
    """Deterministic one-step shift."""
    v = [0.0] * q
    v[1 % q] = 1.0
    return IncrementLaw1D(tuple(v))


def lazy_law(q: int, gamma: float) -> IncrementLaw1D:
    """Hold with probability 1-gamma, else one unit left/right equally."""
    if not 0 <= gamma <= 1:
        raise ValidationError(f"gamma must be in [0, 1], got {gamma}")
    v = [0.0] * q
    v[0] = 1 - gamma
    v[1 % q] += gamma / 2
    v[(q - 1) % q] += gamma / 2
    return IncrementLaw1D(tuple(v))


def uniform_law(q: int) -> IncrementLaw1D:
    return IncrementLaw1D((1.0 / q,) * q)


def mixture_law(q: int, beta: float, gamma: float) -> IncrementLaw1D:
    """Unit left/right jumps w.p. beta*gamma/2 each, else a uniform draw."""
    if not (0 <= beta <= 1 and 0 <= gamma <= 1):
        raise ValidationError("beta and gamma must be in [0, 1]")
    v = np.full(q, (1 - beta * gamma) / q)
    v[1 % q] += beta * gamma / 2
    v[(q - 1) % q] += beta * gamma / 2
    return IncrementLaw1D(tuple(v))


def symmetric_law(v) -> IncrementLaw1D:
    law = IncrementLaw1D(tuple(float(x) for x in v))
    if not law.is_symmetric():
        raise ValidationError("law is not symmetric: v[j] != v[q-j]")
    return law
