import math
from fractions import Fraction

import numpy as np
import pytest

from zqwalk.core import (
    enumerate_count_vectors,
    enumerate_multi_indices,
    is_prime,
    multinomial_coeff,
    norm_h,
    root_of_unity,
    roots_of_unity,
    stationary_pmf,
    validate_count_vector,
)
from zqwalk.errors import SizeGuardError, ValidationError


class TestRootsOfUnity:
    def test_quarter_turn(self):
        assert abs(root_of_unity(4, 1) - 1j) < 1e-15

    def test_half_turn(self):
        assert abs(root_of_unity(2, 1) - (-1)) < 1e-15

    def test_wraps_mod_q(self):
        assert abs(root_of_unity(3, 5) - np.exp(4j * np.pi / 3)) < 1e-15

    def test_unit_modulus(self):
        for q in range(2, 65):
            assert np.max(np.abs(np.abs(roots_of_unity(q)) - 1)) < 1e-15

    def test_conjugate_pairs_multiply_to_one(self):
        for q in range(2, 65):
            for k in range(q):
                assert abs(root_of_unity(q, k) * root_of_unity(q, q - k) - 1) < 1e-14

    def test_character_orthogonality(self):
        for q in range(2, 12):
            theta = roots_of_unity(q)
            for r in range(q):
                for s in range(q):
                    val = np.mean(theta**r * np.conj(theta**s))
                    assert abs(val - (1.0 if r == s else 0.0)) < 1e-12

    def test_invalid_modulus(self):
        with pytest.raises(ValidationError):
            roots_of_unity(1)


class TestEnumerations:
    def test_count_vectors_d1_q2(self):
        assert enumerate_count_vectors(1, 2) == ((0, 1), (1, 0))

    def test_count_vectors_d2_q2(self):
        assert enumerate_count_vectors(2, 2) == ((0, 2), (1, 1), (2, 0))

    def test_count_vectors_cardinality(self):
        assert len(enumerate_count_vectors(2, 3)) == 6
        for d, q in [(3, 3), (4, 4), (6, 2)]:
            assert len(enumerate_count_vectors(d, q)) == math.comb(d + q - 1, q - 1)

    def test_count_vectors_sum_and_order(self):
        vs = enumerate_count_vectors(4, 3)
        assert all(sum(v) == 4 for v in vs)
        assert list(vs) == sorted(vs)

    def test_multi_indices_d1_q3(self):
        assert enumerate_multi_indices(1, 3) == ((0, 0), (0, 1), (1, 0))

    def test_multi_indices_d2_q2(self):
        assert enumerate_multi_indices(2, 2) == ((0,), (1,), (2,))

    def test_multi_indices_cardinality(self):
        assert len(enumerate_multi_indices(3, 3)) == 10
        for d, q in [(4, 3), (3, 4)]:
            assert len(enumerate_multi_indices(d, q)) == math.comb(d + q - 1, q - 1)

    def test_size_guard(self):
        with pytest.raises(SizeGuardError):
            enumerate_count_vectors(10**6, 5)

    def test_invalid_arguments(self):
        with pytest.raises(ValidationError):
            enumerate_count_vectors(-1, 3)
        with pytest.raises(ValidationError):
            enumerate_multi_indices(2, 1)


class TestMultinomial:
    def test_values(self):
        assert multinomial_coeff((2, 1, 1)) == 12
        assert multinomial_coeff((1, 1, 2)) == 12
        assert multinomial_coeff((5, 0, 0)) == 1

    def test_exact_at_large_d(self):
        # float factorials would lose these digits
        assert multinomial_coeff((10, 10, 10)) == math.factorial(30) // math.factorial(10) ** 3

    def test_negative_entry_rejected(self):
        with pytest.raises(ValidationError):
            multinomial_coeff((2, -1))

    def test_wrong_total_rejected(self):
        with pytest.raises(ValidationError):
            validate_count_vector((1, 1), 3)


class TestStationaryPmf:
    def test_simple_values(self):
        assert stationary_pmf((1, 0), 2) == 0.5
        assert stationary_pmf((3, 0, 0), 3) == pytest.approx(27**-1)

    def test_normalization(self):
        for q in (2, 3, 4, 5):
            for d in range(1, 9 if q < 4 else 6):
                total = sum(stationary_pmf(m, q) for m in enumerate_count_vectors(d, q))
                assert abs(total - 1.0) < 1e-12


class TestNormH:
    def test_zero_index(self):
        assert norm_h((0, 0), 4) == Fraction(1)

    def test_example(self):
        assert norm_h((2, 1), 4) == Fraction(1, 12)

    def test_full_degree(self):
        assert norm_h((3, 0), 3) == Fraction(1, 1)

    def test_inverse_sums_to_q_pow_d(self):
        for q, d in [(2, 5), (3, 4), (4, 3)]:
            total = sum(1 / norm_h(l, d) for l in enumerate_multi_indices(d, q))
            assert total == q**d

    def test_out_of_range(self):
        with pytest.raises(ValidationError):
            norm_h((3, 2), 4)


def test_is_prime():
    assert [n for n in range(2, 20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert not is_prime(1)
