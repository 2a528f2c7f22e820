"""Random walks on the product space V_{q,d} = {0,...,q-1}^d.

The walk adds an increment vector V componentwise mod q each step.  Its
q^d eigenvalues are the character expectations rho_r = E[theta_1^{V.r}],
indexed by r in V_{q,d}.  Four increment-law variants are supported:
explicit support, i.i.d. product, exchangeable-by-counts (a law on count
vectors with a uniformly random assignment of values to coordinates), and
finite mixtures.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circulant import IncrementLaw1D
from .core import (
    multinomial_coeff,
    root_of_unity,
    roots_of_unity,
    validate_count_vector,
)
from .errors import SizeGuardError, UnsupportedOperationError, ValidationError

PROB_TOL = 1e-12
# Full q^d matrix/kernel operations are refused beyond this state count.
STATE_SPACE_GUARD = 2**20


class IncrementDist:
    """Base class for increment laws on V_{q,d}."""

    q: int
    d: int

    def rho(self, r) -> complex:
        """rho_r = E[theta_1^{V.r}] for r in V_{q,d}."""
        raise NotImplementedError

    def pmf(self, v) -> float:
        """P(V = v)."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator) -> tuple[int, ...]:
        raise NotImplementedError

    def support_items(self) -> list[tuple[tuple[int, ...], float]]:
        """Enumerated (point, probability) support, where feasible."""
        raise UnsupportedOperationError(
            f"{type(self).__name__} has no enumerable support"
        )

    def count_law(self) -> dict[tuple[int, ...], float]:
        """Law of the count vector of V, for exchangeable variants."""
        raise UnsupportedOperationError(
            f"{type(self).__name__} is not exchangeable-by-counts"
        )

    def is_exchangeable(self) -> bool:
        return False

    def _check_r(self, r) -> tuple[int, ...]:
        r = tuple(int(x) % self.q for x in r)
        if len(r) != self.d:
            raise ValidationError(f"index r has length {len(r)}, expected {self.d}")
        return r


def _validate_weights(ws, what: str):
    if any(w < 0 for w in ws):
        raise ValidationError(f"negative {what}")
    if abs(sum(ws) - 1.0) > PROB_TOL:
        raise ValidationError(f"{what} sum to {sum(ws)}, not 1")


@dataclass
class ExplicitIncrement(IncrementDist):
    """Finitely supported law given as distinct (point, probability) pairs."""

    support: list[tuple[tuple[int, ...], float]]
    q: int
    d: int

    def __post_init__(self):
        pts = [tuple(int(c) for c in p) for p, _ in self.support]
        probs = [float(w) for _, w in self.support]
        if len(set(pts)) != len(pts):
            raise ValidationError("support points are not distinct")
        for p in pts:
            if len(p) != self.d or any(not 0 <= c < self.q for c in p):
                raise ValidationError(f"support point {p} outside V_{{{self.q},{self.d}}}")
        _validate_weights(probs, "probabilities")
        self.support = list(zip(pts, probs))
        self._pmf = dict(self.support)
        self._points = pts
        self._probs = np.array(probs)

    def rho(self, r) -> complex:
        r = self._check_r(r)
        total = 0j
        for p, w in self.support:
            dot = sum(pc * rc for pc, rc in zip(p, r))
            total += w * root_of_unity(self.q, dot)
        return total

    def pmf(self, v) -> float:
        return self._pmf.get(tuple(int(c) for c in v), 0.0)

    def sample(self, rng):
        i = rng.choice(len(self._points), p=self._probs)
        return self._points[i]

    def support_items(self):
        return list(self.support)


@dataclass
class IIDProductIncrement(IncrementDist):
    """Independent coordinates, each with its own 1-D increment law."""

    marginals: list[IncrementLaw1D]

    def __post_init__(self):
        if not self.marginals:
            raise ValidationError("need at least one marginal")
        qs = {m.q for m in self.marginals}
        if len(qs) != 1:
            raise ValidationError("marginals have mixed moduli")
        self.q = qs.pop()
        self.d = len(self.marginals)

    def rho(self, r) -> complex:
        r = self._check_r(r)
        out = 1.0 + 0j
        for law, rk in zip(self.marginals, r):
            theta = roots_of_unity(self.q)
            out *= sum(p * theta[(j * rk) % self.q] for j, p in enumerate(law.v))
        return out

    def pmf(self, v) -> float:
        v = tuple(int(c) % self.q for c in v)
        out = 1.0
        for law, c in zip(self.marginals, v):
            out *= law.v[c]
        return out

    def sample(self, rng):
        return tuple(
            int(rng.choice(self.q, p=np.asarray(law.v))) for law in self.marginals
        )

    def support_items(self):
        size = 1
        for law in self.marginals:
            size *= sum(1 for p in law.v if p > 0)
            if size > STATE_SPACE_GUARD:
                raise SizeGuardError("i.i.d. support too large to enumerate")
        items = [((), 1.0)]
        for law in self.marginals:
            items = [
                (p + (j,), w * pj)
                for p, w in items
                for j, pj in enumerate(law.v)
                if pj > 0
            ]
        return items


@dataclass
class ExchangeableCountsIncrement(IncrementDist):
    """Law of the count vector of V, values assigned uniformly to coordinates.

    counts_law maps a length-q count vector summing to d to its probability.
    """

    counts_law: dict[tuple[int, ...], float]
    q: int
    d: int

    def __post_init__(self):
        clean = {}
        for c, w in self.counts_law.items():
            c = validate_count_vector(c, self.d)
            if len(c) != self.q:
                raise ValidationError(f"count vector {c} has length != q={self.q}")
            clean[c] = clean.get(c, 0.0) + float(w)
        _validate_weights(list(clean.values()), "count-vector probabilities")
        self.counts_law = clean

    def is_exchangeable(self) -> bool:
        return True

    def count_law(self):
        return dict(self.counts_law)

    def rho(self, r) -> complex:
        r = self._check_r(r)
        # rho is invariant under permutations of r, so work with sorted r
        # and average over uniformly random assignments by a DP over the
        # remaining value counts (never enumerating the d!/prod c_j!
        # assignments directly).
        r_sorted = tuple(sorted(r))
        theta = roots_of_unity(self.q)

        @lru_cache(maxsize=None)
        def avg(k: int, counts: tuple[int, ...]) -> complex:
            if k == self.d:
                return 1.0 + 0j
            n = self.d - k
            total = 0j
            for j, cj in enumerate(counts):
                if cj:
                    rest = counts[:j] + (cj - 1,) + counts[j + 1 :]
                    total += (cj / n) * theta[(j * r_sorted[k]) % self.q] * avg(
                        k + 1, rest
                    )
            return total

        out = 0j
        for c, w in self.counts_law.items():
            if w:
                out += w * avg(0, c)
        avg.cache_clear()
        return out

    def pmf(self, v) -> float:
        v = tuple(int(c) % self.q for c in v)
        counts = tuple(v.count(j) for j in range(self.q))
        w = self.counts_law.get(counts, 0.0)
        return w / multinomial_coeff(counts) if w else 0.0

    def sample(self, rng):
        keys = list(self.counts_law)
        probs = np.array([self.counts_law[k] for k in keys])
        c = keys[rng.choice(len(keys), p=probs)]
        vals = np.repeat(np.arange(self.q), c)
        return tuple(int(x) for x in rng.permutation(vals))

    def support_items(self):
        size = sum(multinomial_coeff(c) for c, w in self.counts_law.items() if w > 0)
        if size > STATE_SPACE_GUARD:
            raise SizeGuardError("exchangeable support too large to enumerate")
        items = []
        for c, w in self.counts_law.items():
            if w <= 0:
                continue
            per = w / multinomial_coeff(c)
            for v in _vectors_with_counts(c):
                items.append((v, per))
        return items


def _vectors_with_counts(counts: tuple[int, ...]):
    """All distinct vectors whose value-occupancy equals `counts`."""
    q = len(counts)

    def rec(remaining: tuple[int, ...]):
        if sum(remaining) == 0:
            yield ()
            return
        for j in range(q):
            if remaining[j]:
                rest = remaining[:j] + (remaining[j] - 1,) + remaining[j + 1 :]
                for tail in rec(rest):
                    yield (j,) + tail

    yield from rec(counts)


@dataclass
class MixtureIncrement(IncrementDist):
    """Finite mixture of increment laws on a common V_{q,d}."""

    components: list[tuple[float, IncrementDist]]

    def __post_init__(self):
        if not self.components:
            raise ValidationError("mixture needs at least one component")
        _validate_weights([w for w, _ in self.components], "mixture weights")
        qs = {c.q for _, c in self.components}
        ds = {c.d for _, c in self.components}
        if len(qs) != 1 or len(ds) != 1:
            raise ValidationError("mixture components on different spaces")
        self.q = qs.pop()
        self.d = ds.pop()

    def is_exchangeable(self) -> bool:
        return all(c.is_exchangeable() for _, c in self.components)

    def count_law(self):
        out: dict[tuple[int, ...], float] = {}
        for w, c in self.components:
            for key, p in c.count_law().items():
                out[key] = out.get(key, 0.0) + w * p
        return out

    def rho(self, r) -> complex:
        return sum(w * c.rho(r) for w, c in self.components)

    def pmf(self, v) -> float:
        return sum(w * c.pmf(v) for w, c in self.components)

    def sample(self, rng):
        weights = np.array([w for w, _ in self.components])
        i = rng.choice(len(self.components), p=weights)
        return self.components[i][1].sample(rng)

    def support_items(self):
        merged: dict[tuple[int, ...], float] = {}
        for w, c in self.components:
            for p, pw in c.support_items():
                merged[p] = merged.get(p, 0.0) + w * pw
        return list(merged.items())


def _check_state_space(q: int, d: int):
    if q**d > STATE_SPACE_GUARD:
        raise SizeGuardError(
            f"state space q^d = {q}^{d} exceeds {STATE_SPACE_GUARD}; "
            "use simulation or the grouped chain"
        )


def rho_array(incr: IncrementDist) -> np.ndarray:
    """All rho_r on the full grid V_{q,d}, shape (q,)*d."""
    q, d = incr.q, incr.d
    _check_state_space(q, d)
    if isinstance(incr, ExplicitIncrement):
        grids = np.indices((q,) * d)
        out = np.zeros((q,) * d, dtype=complex)
        theta = roots_of_unity(q)
        for p, w in incr.support:
            dot = sum(pc * g for pc, g in zip(p, grids)) % q
            out += w * theta[dot]
        return out
    if isinstance(incr, IIDProductIncrement):
        theta = roots_of_unity(q)
        out = np.ones((q,) * d, dtype=complex)
        for axis, law in enumerate(incr.marginals):
            eta = np.array(
                [sum(p * theta[(j * r) % q] for j, p in enumerate(law.v)) for r in range(q)]
            )
            shape = [1] * d
            shape[axis] = q
            out = out * eta.reshape(shape)
        return out
    if isinstance(incr, ExchangeableCountsIncrement):
        # rho depends on r only through its sorted form; evaluate one
        # representative per equivalence class and broadcast.
        out = np.empty((q,) * d, dtype=complex)
        cache: dict[tuple[int, ...], complex] = {}
        for r in np.ndindex(*(q,) * d):
            key = tuple(sorted(r))
            if key not in cache:
                cache[key] = incr.rho(key)
            out[r] = cache[key]
        return out
    if isinstance(incr, MixtureIncrement):
        out = np.zeros((q,) * d, dtype=complex)
        for w, c in incr.components:
            out += w * rho_array(c)
        return out
    raise ValidationError(f"unknown increment variant {type(incr).__name__}")


def spectral_kernel(incr: IncrementDist) -> np.ndarray:
    """kernel[delta] = q^{-d} sum_r rho_r theta_1^{delta.r} over delta = x - y.

    Computed by an inverse FFT of the eigenvalue grid; the transition
    probability is P_xy = kernel[(x - y) mod q] and P(V = v) =
    kernel[(-v) mod q].
    """
    return np.fft.ifftn(rho_array(incr))


def transition_prob(incr: IncrementDist, x, y) -> float:
    """P(X_{t+1} = y | X_t = x) via the spectral expansion."""
    q, d = incr.q, incr.d
    x = tuple(int(c) % q for c in x)
    y = tuple(int(c) % q for c in y)
    if len(x) != d or len(y) != d:
        raise ValidationError("state has wrong dimension")
    kernel = spectral_kernel(incr)
    delta = tuple((xc - yc) % q for xc, yc in zip(x, y))
    val = kernel[delta]
    if abs(val.imag) > 1e-10:
        raise ValidationError(f"imaginary residue {val.imag:.3e} in transition")
    return float(max(0.0, min(1.0, val.real)))


def step_sample(x, incr: IncrementDist, seed: int) -> tuple[int, ...]:
    """One step from x with a draw from incr; deterministic given seed."""
    rng = np.random.default_rng(seed)
    z = incr.sample(rng)
    return tuple((int(xc) + int(zc)) % incr.q for xc, zc in zip(x, z))


def counts_of_difference(x, y, q: int) -> tuple[int, ...]:
    """Occupancy of (y - x) mod q: entry k counts coordinates where y-x = k."""
    if len(x) != len(y):
        raise ValidationError(f"dimension mismatch: {len(x)} vs {len(y)}")
    diffs = [(int(yc) - int(xc)) % q for xc, yc in zip(x, y)]
    return tuple(diffs.count(k) for k in range(q))


# Named exchangeable increment laws.


def left_shift_increment(q: int, d: int) -> ExchangeableCountsIncrement:
    """Exactly one uniformly chosen coordinate increases by 1."""
    c = (d - 1, 1) + (0,) * (q - 2)
    return ExchangeableCountsIncrement({c: 1.0}, q, d)


def neighbor_increment(q: int, d: int) -> ExchangeableCountsIncrement:
    """One uniformly chosen coordinate moves +1 or -1 with equal probability."""
    up = (d - 1, 1) + (0,) * (q - 2)
    down = (d - 1,) + (0,) * (q - 2) + (1,)
    if q == 2:
        return ExchangeableCountsIncrement({up: 1.0}, q, d)
    return ExchangeableCountsIncrement({up: 0.5, down: 0.5}, q, d)


def subset_toggle_increment(q: int, d: int, A: int) -> ExchangeableCountsIncrement:
    """A uniformly random A-subset of coordinates each takes a uniform
    nonzero value; the rest stay put."""
    if not 0 <= A <= d:
        raise ValidationError(f"need 0 <= A <= d, got A={A}, d={d}")
    law: dict[tuple[int, ...], float] = {}
    from .core import enumerate_count_vectors

    for c in enumerate_count_vectors(A, q - 1) if q > 2 else [(A,)]:
        counts = (d - A,) + c
        law[counts] = multinomial_coeff(c) / (q - 1) ** A
    return ExchangeableCountsIncrement(law, q, d)


def hamming_increment(q: int, d: int, qh) -> ExchangeableCountsIncrement:
    """q_h[h] coordinates change to uniform nonzero values."""
    qh = [float(x) for x in qh]
    if len(qh) != d + 1:
        raise ValidationError(f"q_h must have length d+1={d + 1}")
    _validate_weights(qh, "change-count probabilities")
    from .core import enumerate_count_vectors

    law: dict[tuple[int, ...], float] = {}
    for h, w in enumerate(qh):
        if w <= 0:
            continue
        for c in enumerate_count_vectors(h, q - 1) if q > 2 else [(h,)]:
            counts = (d - h,) + c
            law[counts] = law.get(counts, 0.0) + w * multinomial_coeff(c) / (q - 1) ** h
    return ExchangeableCountsIncrement(law, q, d)


def iid_increment(law: IncrementLaw1D, d: int) -> IIDProductIncrement:
    return IIDProductIncrement([law] * d)
