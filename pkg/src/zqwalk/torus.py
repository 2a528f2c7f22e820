"""Additive random walks on the torus [0, 1).

The step distribution is described by its Fourier coefficients
ghat(r) = E[e^{2 pi i V r}].  The t-step transition density is the series
sum_r ghat(r)^t e^{2 pi i r (a-b)}, truncated using a quadratic tail bound
|ghat(r)| <= C / (2 pi r)^2.  The von Mises family, Poisson time embedding,
and Beta-subordinator eigenvalues are provided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import UnsupportedOperationError, ValidationError

MAX_SERIES_TERMS = 10**4


@dataclass
class TorusLaw:
    """Step law on [0,1) described in the Fourier domain.

    tail_constant C satisfies |ghat(r)| <= C/(2 pi r)^2 for all r >= 1 and
    controls series truncation.  monotone_modulus marks laws whose |ghat(r)|
    is nonincreasing in r, enabling a sharper rigorous truncation.
    """

    ghat: Callable[[int], complex]
    tail_constant: Optional[float] = None
    sampler: Optional[Callable[[np.random.Generator], float]] = None
    cdf: Optional[Callable[[float], float]] = None
    monotone_modulus: bool = False

    def __post_init__(self):
        if abs(self.ghat(0) - 1.0) > 1e-12:
            raise ValidationError("ghat(0) must equal 1")


def torus_step(a: float, law: TorusLaw, seed: int) -> float:
    """(a + V) mod 1 with V drawn from the law; deterministic given seed."""
    if law.sampler is None:
        raise UnsupportedOperationError("law has no sampler attached")
    rng = np.random.default_rng(seed)
    return float((a + law.sampler(rng)) % 1.0)


def transition_cdf(a: float, b: float, vcdf: Callable[[float], float]) -> float:
    """P(B_{t+1} <= b | B_t = a) = P(V <= b-a) + P(1-a < V <= b+1-a).

    The first term covers steps without wrap-around, the second steps that
    wrap past 1.
    """
    no_wrap = vcdf(b - a) if b - a >= 0 else 0.0
    wrapped = max(0.0, vcdf(b + 1 - a) - vcdf(1 - a))
    return no_wrap + wrapped


def _generic_tail(C: float, t: int, R: int) -> float:
    """Bound on 2 sum_{r > R} (C/(2 pi r)^2)^t via the integral estimate."""
    base = (C / (2 * math.pi) ** 2) ** t
    return 2 * base * R ** (1 - 2 * t) / (2 * t - 1)


def density_series(law: TorusLaw, t: int, a: float, b: float, eps: float) -> float:
    """f_t(b | a) = sum_r ghat(r)^t e^{2 pi i r (a-b)}, truncated to tail < eps."""
    if t < 1:
        raise ValidationError(f"t must be >= 1, got {t}")
    if eps <= 0:
        raise ValidationError("eps must be positive")
    C = law.tail_constant
    if C is None:
        raise UnsupportedOperationError(
            "cannot truncate the density series without a tail constant"
        )
    phase = 2 * math.pi * (a - b)
    total = 1.0 + 0j
    r = 0
    while True:
        r += 1
        if r > 1 and _generic_tail(C, t, r - 1) < eps:
            break
        g = complex(law.ghat(r)) ** t
        total += g * complex(math.cos(r * phase), math.sin(r * phase))
        total += np.conj(g) * complex(math.cos(r * phase), -math.sin(r * phase))
        if law.monotone_modulus:
            # Early exit: the next coefficient already dominates the tail of
            # the quadratic bound.  Split the remaining sum at the crossover
            # radius r* where C/(2 pi r*)^2 falls below |ghat(r+1)|; up to r*
            # each term is at most |ghat(r+1)|^t, beyond r* the generic bound
            # applies.
            nxt = abs(law.ghat(r + 1))
            if nxt == 0.0:
                break
            r_star = max(r + 1, math.ceil(math.sqrt(C / nxt) / (2 * math.pi)))
            tail = 2 * (r_star - r) * nxt**t + _generic_tail(C, t, r_star)
            if tail < eps:
                break
        if r > 10**7:
            raise ValidationError("density series truncation radius exceeds 1e7")
    if abs(total.imag) > eps:
        raise ValidationError(f"imaginary residue {total.imag:.3e} in density")
    return float(total.real)


def _bessel_i_ratio(k: float, r: int) -> float:
    """I_|r|(k) / I_0(k) by the ascending power series."""
    r = abs(int(r))

    def series(nu: int) -> float:
        # Leading term (k/2)^nu / nu! computed in log space to avoid
        # overflow/underflow (and the underflow-to-zero stall) at large nu.
        log_lead = nu * math.log(k / 2) - math.lgamma(nu + 1)
        if log_lead < -745:  # below double-precision range
            return 0.0
        term = math.exp(log_lead)
        total = term
        s = 0
        while True:
            s += 1
            term *= (k / 2) ** 2 / (s * (s + nu))
            total += term
            if term <= 1e-17 * total:
                return total

    return series(r) / series(0)


def von_mises_ghat(k: float, r: int) -> float:
    """Fourier coefficient of the von Mises density e^{k cos(2 pi v)} / I_0(k)."""
    if k < 0:
        raise ValidationError(f"concentration must be >= 0, got {k}")
    if k > 50:
        raise ValidationError("concentration > 50 is outside the series range")
    if k == 0:
        return 1.0 if r == 0 else 0.0
    return _bessel_i_ratio(k, r)


def von_mises_law(k: float) -> TorusLaw:
    """Von Mises step law with concentration k (uniform when k = 0)."""
    von_mises_ghat(k, 0)  # validates the range

    from functools import lru_cache

    @lru_cache(maxsize=None)
    def ghat(r: int) -> float:
        return von_mises_ghat(k, r)

    def sampler(rng: np.random.Generator) -> float:
        if k == 0:
            return float(rng.random())
        return float((rng.vonmises(0.0, k) / (2 * math.pi)) % 1.0)

    # Tail constant: |ghat(r)| = I_r(k)/I_0(k) <= (k/2)^r e^k / (r! I_0(k)),
    # and r^2 (k/2)^r / r! is maximized well below k(k+1)e^k scale, giving
    # C = (2 pi)^2 k (k+1) e^k / I_0(k) (validated against ghat in tests).
    term, total, s = 1.0, 1.0, 0
    while term > 1e-17 * total:
        s += 1
        term *= (k / 2) ** 2 / (s * s)
        total += term
    C = (2 * math.pi) ** 2 * max(k, 1.0) * (k + 1) * math.exp(k) / total
    return TorusLaw(
        ghat=ghat,
        tail_constant=C,
        sampler=sampler,
        monotone_modulus=True,
    )


def poisson_eigenvalue(lam: float, tau: float, r: int, law: TorusLaw) -> complex:
    """Eigenvalue of the Poisson(lam)-paced continuous-time walk at time tau."""
    if lam < 0 or tau < 0:
        raise ValidationError("rate and time must be >= 0")
    return complex(np.exp(lam * tau * (complex(law.ghat(r)) - 1.0)))


def confluent_1f1_b1(a: float, z: complex) -> complex:
    """1F1(a, 1; z) = sum_s (a)_s z^s / (s!)^2, to relative tail 1e-14."""
    term = 1.0 + 0j
    total = term
    for s in range(MAX_SERIES_TERMS):
        term *= (a + s) * z / ((s + 1) ** 2)
        total += term
        if abs(term) < 1e-14 * max(abs(total), 1.0):
            return total
    raise ValidationError("confluent hypergeometric series did not converge")


def beta_subordinator_eigenvalue(gamma: float, tau: float, r: int) -> complex:
    """exp{tau (1-gamma)^{-1} (1F1(1-gamma, 1; 2 pi i r) - 1)}."""
    if not 0 < gamma < 1:
        raise ValidationError(f"gamma must be in (0, 1), got {gamma}")
    if tau < 0:
        raise ValidationError("tau must be >= 0")
    theta = 2 * math.pi * r
    f = confluent_1f1_b1(1 - gamma, 1j * theta)
    return complex(np.exp(tau / (1 - gamma) * (f - 1.0)))
