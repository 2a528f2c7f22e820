import numpy as np
import pytest

from zqwalk.circulant import lazy_law, uniform_law
from zqwalk.errors import (
    NumericalInconsistencyError,
    SizeGuardError,
    ValidationError,
)
from zqwalk.oracle import (
    EmpiricalDist,
    compare,
    matrix_power_reference,
    one_step_matrix,
    simulate_paths,
)
from zqwalk.product import (
    ExplicitIncrement,
    iid_increment,
    rho_array,
    subset_toggle_increment,
)


class TestEmpiricalDist:
    def test_counts_must_sum(self):
        with pytest.raises(ValidationError):
            EmpiricalDist({(0,): 3}, 5, 0)

    def test_frequency(self):
        emp = EmpiricalDist({(0,): 3, (1,): 7}, 10, 0)
        assert emp.frequency((1,)) == 0.7
        assert emp.frequency((2,)) == 0.0


class TestSimulation:
    def test_reproducible(self):
        incr = iid_increment(lazy_law(3, 0.5), 2)
        a = simulate_paths(incr, (0, 0), 3, 500, seed=9)
        b = simulate_paths(incr, (0, 0), 3, 500, seed=9)
        assert a.counts == b.counts

    def test_seed_changes_outcome(self):
        # per-path streams are seed XOR i, so pick base seeds whose XOR
        # orbits over i = 0..499 are disjoint
        incr = iid_increment(lazy_law(3, 0.5), 2)
        a = simulate_paths(incr, (0, 0), 3, 500, seed=0)
        b = simulate_paths(incr, (0, 0), 3, 500, seed=1 << 20)
        assert a.counts != b.counts

    def test_zero_steps_stays_put(self):
        incr = iid_increment(uniform_law(3), 2)
        emp = simulate_paths(incr, (1, 2), 0, 100, seed=0)
        assert emp.counts == {(1, 2): 100}

    def test_grouped_keys(self):
        incr = subset_toggle_increment(3, 3, 1)
        emp = simulate_paths(incr, (0, 0, 0), 1, 200, seed=1, grouped=True)
        assert all(sum(k) == 3 and len(k) == 3 for k in emp.counts)

    def test_validation(self):
        incr = iid_increment(uniform_law(3), 1)
        with pytest.raises(ValidationError):
            simulate_paths(incr, (0,), -1, 10, 0)
        with pytest.raises(ValidationError):
            simulate_paths(incr, (0,), 1, 0, 0)


class TestMatrixReference:
    def test_rows_sum_to_one(self):
        incr = subset_toggle_increment(3, 3, 2)
        P, states = one_step_matrix(incr)
        assert np.allclose(P.sum(axis=1), 1.0)
        assert len(states) == 27

    def test_matches_spectral_kernel(self):
        from zqwalk.product import transition_prob

        incr = ExplicitIncrement([((0, 1), 0.5), ((2, 2), 0.5)], 3, 2)
        P, states = one_step_matrix(incr)
        for i, x in enumerate(states):
            for j, y in enumerate(states):
                assert abs(P[i, j] - transition_prob(incr, x, y)) < 1e-10

    def test_power_matches_spectral_power(self):
        incr = iid_increment(lazy_law(3, 0.6), 2)
        q, d = incr.q, incr.d
        for t in (0, 1, 4):
            Pt, states = matrix_power_reference(incr, t)
            kernel_t = np.fft.ifftn(rho_array(incr) ** t)
            for i, x in enumerate(states):
                for j, y in enumerate(states):
                    delta = tuple((xc - yc) % q for xc, yc in zip(x, y))
                    assert abs(Pt[i, j] - kernel_t[delta].real) < 1e-10

    def test_size_guard(self):
        incr = iid_increment(uniform_law(4), 7)
        with pytest.raises(SizeGuardError):
            one_step_matrix(incr)


class TestCompare:
    def test_agreeing_distributions_pass(self):
        incr = iid_increment(lazy_law(3, 0.5), 2)
        emp = simulate_paths(incr, (0, 0), 2, 20000, seed=3)
        Pt, states = matrix_power_reference(incr, 2)
        i0 = states.index((0, 0))
        expected = {y: Pt[i0, j] for j, y in enumerate(states)}
        report = compare(expected, emp)
        assert report.max_z < 5

    def test_wrong_prediction_fails(self):
        incr = iid_increment(lazy_law(3, 0.5), 2)
        emp = simulate_paths(incr, (0, 0), 2, 20000, seed=3)
        Pt, states = matrix_power_reference(incr, 2)
        i0 = states.index((0, 0))
        expected = {y: Pt[i0, j] for j, y in enumerate(states)}
        # deliberately shift mass between two cells
        expected[(0, 0)] -= 0.05
        expected[(1, 1)] += 0.05
        report = compare(expected, emp)
        assert report.max_z > 10

    def test_impossible_outcome_raises(self):
        emp = EmpiricalDist({(0,): 99, (1,): 1}, 100, 0)
        with pytest.raises(NumericalInconsistencyError):
            compare({(0,): 1.0}, emp)

    def test_report_json(self):
        import json

        emp = EmpiricalDist({(0,): 50, (1,): 50}, 100, 0)
        report = compare({(0,): 0.5, (1,): 0.5}, emp)
        doc = json.loads(report.to_json())
        assert doc["n_cells"] == 2
        assert doc["max_abs_dev"] == 0.0
