"""Independent reference machinery for validating the spectral formulas.

Path simulation with reproducible per-path seeding, dense matrix powers
built from direct increment lookup (never from the spectral expansion), and
a z-score comparison between predicted and empirical distributions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalInconsistencyError, SizeGuardError, ValidationError
from .product import IncrementDist, counts_of_difference

MATRIX_GUARD = 2**12


@dataclass
class EmpiricalDist:
    """Counts of observed outcomes from a seeded simulation."""

    counts: dict
    total: int
    seed: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.total:
            raise ValidationError("counts do not sum to the path total")

    def frequency(self, key) -> float:
        return self.counts.get(key, 0) / self.total


@dataclass
class ComparisonReport:
    """Summary of a predicted-vs-empirical comparison."""

    max_abs_dev: float
    max_z: float
    n_cells: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "max_abs_dev": self.max_abs_dev,
                "max_z": self.max_z,
                "n_cells": self.n_cells,
            }
        )


def simulate_paths(
    incr: IncrementDist,
    x0,
    t: int,
    n_paths: int,
    seed: int,
    grouped: bool = False,
) -> EmpiricalDist:
    """End states of n_paths walks of t steps from x0.

    Deterministic given seed; path i uses an independent stream seeded by
    seed XOR i.  With grouped=True, outcomes are keyed by the count vector
    of the end state relative to x0.
    """
    if n_paths < 1:
        raise ValidationError("need at least one path")
    if t < 0:
        raise ValidationError("t must be >= 0")
    q = incr.q
    x0 = tuple(int(c) % q for c in x0)
    counts: dict = {}
    for i in range(n_paths):
        rng = np.random.default_rng(seed ^ i)
        x = x0
        for _ in range(t):
            z = incr.sample(rng)
            x = tuple((xc + int(zc)) % q for xc, zc in zip(x, z))
        key = counts_of_difference(x0, x, q) if grouped else x
        counts[key] = counts.get(key, 0) + 1
    return EmpiricalDist(counts, n_paths, seed)


def one_step_matrix(incr: IncrementDist) -> tuple[np.ndarray, list]:
    """Dense one-step matrix built by direct pmf lookup P(V = y - x)."""
    q, d = incr.q, incr.d
    if q**d > MATRIX_GUARD:
        raise SizeGuardError(f"q^d = {q**d} exceeds matrix guard {MATRIX_GUARD}")
    states = [tuple(s) for s in np.ndindex(*(q,) * d)]
    # P depends on x, y only through the difference, so evaluate the pmf once
    # per delta and fill the matrix by lookup.
    pmf = {delta: incr.pmf(delta) for delta in states}
    P = np.empty((len(states), len(states)))
    for i, x in enumerate(states):
        for j, y in enumerate(states):
            P[i, j] = pmf[tuple((yc - xc) % q for xc, yc in zip(x, y))]
    return P, states


def matrix_power_reference(incr: IncrementDist, t: int) -> tuple[np.ndarray, list]:
    """Exact t-step matrix by repeated multiplication of the lookup matrix."""
    if t < 0:
        raise ValidationError("t must be >= 0")
    P, states = one_step_matrix(incr)
    return np.linalg.matrix_power(P, t), states


def compare(expected: dict, observed: EmpiricalDist) -> ComparisonReport:
    """Per-cell z-scores of observed frequencies against expected
    probabilities, using binomial standard errors."""
    n = observed.total
    max_abs = 0.0
    max_z = 0.0
    keys = set(expected) | set(observed.counts)
    for key in keys:
        p = expected.get(key, 0.0)
        obs = observed.counts.get(key, 0)
        if p <= 0.0:
            if obs > 0:
                raise NumericalInconsistencyError(
                    f"outcome {key} observed {obs} times but predicted impossible"
                )
            continue
        f = obs / n
        dev = abs(f - p)
        se = math.sqrt(p * (1 - p) / n) if 0 < p < 1 else 0.0
        max_abs = max(max_abs, dev)
        if se > 0:
            max_z = max(max_z, dev / se)
        elif dev > 0:
            max_z = math.inf
    return ComparisonReport(max_abs, max_z, len(keys))
