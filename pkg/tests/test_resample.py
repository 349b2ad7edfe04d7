import itertools

import numpy as np
import pytest

from spikephase.exceptions import DomainError, InconsistencyError, RankDeficiencyError
from spikephase.measurement import mu_tilde_eval, time_embedding
from spikephase.resample import (forward_resampling, invert_resampling, is_prime,
                                 partial_dft_matrix)
from tests.helpers import dft_det, random_complex


@pytest.mark.parametrize("n,expected", [(2, True), (3, True), (101, True), (9, False),
                                        (1, False), (0, False), (821, True), (1087, True),
                                        (1089, False)])
def test_is_prime(n, expected):
    assert is_prime(n) is expected


class TestPartialDFT:
    def test_composite_witness(self):
        A = partial_dft_matrix(4, [0, 2], [1, 3]).matrix
        np.testing.assert_allclose(A, [[1, -1], [1, -1]], atol=1e-15)
        assert np.linalg.matrix_rank(A) == 1

    def test_prime_five(self):
        for S in itertools.combinations(range(5), 2):
            for St in itertools.combinations(range(5), 2):
                assert np.linalg.matrix_rank(partial_dft_matrix(5, S, St).matrix) == 2

    def test_zero_column(self):
        A = partial_dft_matrix(7, [0], range(7)).matrix
        np.testing.assert_array_equal(A, np.ones((7, 1)))

    def test_exact_roots_of_unity(self):
        # integer reduction keeps large exponents accurate
        A = partial_dft_matrix(1087, [543], [1086]).matrix
        expected = np.exp(2j * np.pi * ((543 * 1086) % 1087) / 1087)
        assert A[0, 0] == expected

    def test_index_range(self):
        with pytest.raises(DomainError):
            partial_dft_matrix(5, [5], [0])

    @pytest.mark.parametrize("n", [2, 3, 5, 7])
    def test_small_primes_exhaustive(self, n):
        for k in range(1, min(n, 4) + 1):
            for S in itertools.combinations(range(n), k):
                for St in itertools.combinations(range(n), k):
                    assert dft_det(n, S, St) > 1e-12


class TestInvert:
    def test_full_grid(self, rng):
        n, m = 13, 6
        f = random_complex(rng, m)
        y = forward_resampling(f, n, np.arange(n))
        res = invert_resampling(y, np.arange(n), n)
        np.testing.assert_allclose(res.samples, f, atol=1e-12)
        assert res.residual < 1e-13

    def test_minimal_observations(self, rng):
        n, m = 11, 5
        for _ in range(20):
            f = random_complex(rng, m)
            K = rng.choice(n, m, replace=False)
            y = mu_tilde_eval(f, 1.0, 2.0 * K / n)
            res = invert_resampling(y, K, n, m)
            np.testing.assert_allclose(res.samples, f, rtol=1e-9, atol=1e-9)
            assert res.condition >= 1.0 and res.n_observations == m

    def test_composite_refused(self):
        with pytest.raises(DomainError, match="prime"):
            invert_resampling(np.ones(4), [0, 1, 2, 3], 9, 4)

    def test_order_mismatch(self):
        with pytest.raises(DomainError):
            invert_resampling(np.ones(5), range(5), 11, 4)

    def test_too_few(self):
        with pytest.raises(RankDeficiencyError):
            invert_resampling(np.ones(4), [0, 1, 2, 2], 11, 5)

    def test_inconsistent(self, rng):
        y = random_complex(rng, 11)
        with pytest.raises(InconsistencyError):
            invert_resampling(y, np.arange(11), 11, 5)

    def test_duplicates_add_rows(self, rng):
        n, m = 11, 5
        f = random_complex(rng, m)
        K = np.array([0, 1, 2, 3, 4, 0, 1])
        res = invert_resampling(forward_resampling(f, n, K), K, n, m)
        np.testing.assert_allclose(res.samples, f, atol=1e-12)

    def test_zero(self):
        res = invert_resampling(np.zeros(5), range(5), 11)
        assert not res.samples.any()

    def test_round_trips(self, rng):
        for _ in range(100):
            n = int(rng.choice([11, 13, 17, 19, 23, 29, 31]))
            m = (n - 1) // 2
            K = np.sort(rng.choice(n, int(rng.integers(m, n + 1)), replace=False))
            f = random_complex(rng, m)
            y = mu_tilde_eval(f, 1.0, time_embedding(n, 1.0).points[K])
            x = invert_resampling(y, K, n, m).samples
            assert np.linalg.norm(x - f) <= 1e-9 * np.linalg.norm(f)
            y2 = mu_tilde_eval(x, 1.0, time_embedding(n, 1.0).points[K])
            assert np.linalg.norm(y2 - y) <= 1e-9 * np.linalg.norm(y)
