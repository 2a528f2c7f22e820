import numpy as np
import pytest

from zqwalk.circulant import IncrementLaw1D, lazy_law, uniform_law
from zqwalk.errors import SizeGuardError, ValidationError
from zqwalk.product import (
    ExchangeableCountsIncrement,
    ExplicitIncrement,
    IIDProductIncrement,
    MixtureIncrement,
    counts_of_difference,
    hamming_increment,
    iid_increment,
    left_shift_increment,
    neighbor_increment,
    rho_array,
    spectral_kernel,
    step_sample,
    subset_toggle_increment,
    transition_prob,
)


def brute_rho(incr, r):
    """E[theta_1^{V.r}] by direct enumeration of the support."""
    q = incr.q
    total = 0j
    for v, w in incr.support_items():
        dot = sum(int(vc) * int(rc) for vc, rc in zip(v, r)) % q
        total += w * np.exp(2j * np.pi * dot / q)
    return total


def all_variants(q=3, d=3):
    rng = np.random.default_rng(0)
    explicit = ExplicitIncrement(
        [((0, 0, 0), 0.3), ((1, 0, 2), 0.4), ((2, 2, 1), 0.3)], q, d
    )
    iid = IIDProductIncrement(
        [IncrementLaw1D(tuple(rng.dirichlet(np.ones(q)))) for _ in range(d)]
    )
    exch = ExchangeableCountsIncrement({(3, 0, 0): 0.25, (1, 1, 1): 0.5, (0, 2, 1): 0.25}, q, d)
    mix = MixtureIncrement([(0.6, explicit), (0.4, iid)])
    return [explicit, iid, exch, mix]


class TestVariants:
    def test_pmf_sums_to_one(self):
        for incr in all_variants():
            total = sum(w for _, w in incr.support_items())
            assert abs(total - 1) < 1e-12
            total2 = sum(incr.pmf(v) for v in np.ndindex(3, 3, 3))
            assert abs(total2 - 1) < 1e-12

    def test_rho_matches_brute_force(self):
        for incr in all_variants():
            for r in [(0, 0, 0), (1, 0, 0), (1, 2, 1), (2, 2, 2)]:
                assert abs(incr.rho(r) - brute_rho(incr, r)) < 1e-10

    def test_rho_zero_is_one(self):
        for incr in all_variants():
            assert abs(incr.rho((0, 0, 0)) - 1) < 1e-12

    def test_support_items_consistent_with_pmf(self):
        for incr in all_variants():
            for v, w in incr.support_items():
                assert abs(incr.pmf(v) - w) < 1e-12

    def test_sampling_matches_pmf(self):
        rng = np.random.default_rng(42)
        n = 20000
        for incr in all_variants():
            counts = {}
            for _ in range(n):
                v = incr.sample(rng)
                counts[v] = counts.get(v, 0) + 1
            for v, w in incr.support_items():
                if w < 0.01:
                    continue
                se = np.sqrt(w * (1 - w) / n)
                assert abs(counts.get(v, 0) / n - w) < 5 * se

    def test_exchangeable_flag(self):
        explicit, iid, exch, mix = all_variants()
        assert exch.is_exchangeable()
        assert not explicit.is_exchangeable()
        assert not mix.is_exchangeable()

    def test_exchangeable_rho_is_permutation_invariant(self):
        exch = all_variants()[2]
        assert abs(exch.rho((1, 2, 0)) - exch.rho((0, 1, 2))) < 1e-12

    def test_validation_errors(self):
        with pytest.raises(ValidationError):
            ExplicitIncrement([((0, 0), 0.5), ((0, 0), 0.5)], 3, 2)
        with pytest.raises(ValidationError):
            ExplicitIncrement([((0, 5), 1.0)], 3, 2)
        with pytest.raises(ValidationError):
            ExchangeableCountsIncrement({(1, 1): 1.0}, 2, 3)
        with pytest.raises(ValidationError):
            MixtureIncrement([])


class TestSpectralKernel:
    def test_kernel_is_transition_by_difference(self):
        for incr in all_variants():
            kernel = spectral_kernel(incr)
            q = incr.q
            # P(V = v) = kernel[(-v) mod q]
            for v, w in incr.support_items():
                idx = tuple((-c) % q for c in v)
                assert abs(kernel[idx] - w) < 1e-10

    def test_transition_prob_matches_pmf(self):
        for incr in all_variants():
            q = incr.q
            x = (1, 2, 0)
            for y in [(1, 2, 0), (2, 2, 2), (0, 1, 1)]:
                v = tuple((yc - xc) % q for xc, yc in zip(x, y))
                assert abs(transition_prob(incr, x, y) - incr.pmf(v)) < 1e-10

    def test_rho_array_matches_pointwise_rho(self):
        for incr in all_variants():
            grid = rho_array(incr)
            for r in [(0, 0, 0), (1, 0, 2), (2, 1, 1)]:
                assert abs(grid[r] - incr.rho(r)) < 1e-10

    def test_state_space_guard(self):
        incr = iid_increment(uniform_law(2), 25)
        with pytest.raises(SizeGuardError):
            rho_array(incr)


class TestHelpers:
    def test_counts_of_difference(self):
        assert counts_of_difference((0, 0, 0), (1, 0, 2), 3) == (1, 1, 1)
        assert counts_of_difference((1, 1), (1, 1), 3) == (2, 0, 0)
        with pytest.raises(ValidationError):
            counts_of_difference((0,), (0, 1), 3)

    def test_step_sample_deterministic(self):
        incr = iid_increment(lazy_law(3, 0.5), 4)
        assert step_sample((0, 1, 2, 0), incr, 7) == step_sample((0, 1, 2, 0), incr, 7)


class TestNamedIncrements:
    def test_left_shift(self):
        incr = left_shift_increment(3, 4)
        items = incr.support_items()
        assert len(items) == 4
        assert all(sum(v) == 1 and abs(w - 0.25) < 1e-12 for v, w in items)

    def test_neighbor(self):
        incr = neighbor_increment(5, 3)
        for v, w in incr.support_items():
            nz = [c for c in v if c != 0]
            assert len(nz) == 1 and nz[0] in (1, 4)
        assert abs(sum(w for _, w in incr.support_items()) - 1) < 1e-12

    def test_neighbor_binary_collapses(self):
        incr = neighbor_increment(2, 3)
        assert abs(sum(w for _, w in incr.support_items()) - 1) < 1e-12
        assert all(sum(v) == 1 for v, _ in incr.support_items())

    def test_subset_toggle(self):
        incr = subset_toggle_increment(3, 4, 2)
        for v, w in incr.support_items():
            assert sum(1 for c in v if c != 0) == 2
        # C(4,2) subsets * 2^2 value choices, each equally likely
        items = incr.support_items()
        assert len(items) == 6 * 4
        assert all(abs(w - 1 / 24) < 1e-12 for _, w in items)

    def test_hamming(self):
        incr = hamming_increment(3, 3, (0.5, 0.0, 0.5, 0.0))
        mass_by_h = {}
        for v, w in incr.support_items():
            h = sum(1 for c in v if c != 0)
            mass_by_h[h] = mass_by_h.get(h, 0.0) + w
        assert abs(mass_by_h[0] - 0.5) < 1e-12
        assert abs(mass_by_h[2] - 0.5) < 1e-12

    def test_toggle_bad_A(self):
        with pytest.raises(ValidationError):
            subset_toggle_increment(3, 4, 5)
