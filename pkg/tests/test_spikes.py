import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spikephase.exceptions import DomainError
from spikephase.spikes import (SpikeSignal, class_distance, count_real_zeros, fourier_eval,
                               random_signal, zero_count_bound)


class TestSpikeSignal:
    def test_zero_coefficients_dropped(self):
        sig = SpikeSignal(1.0, [0.1, 0.5, 0.9], [1.0, 0.0, 2j])
        assert sig.s == 2
        np.testing.assert_array_equal(sig.supports, [0.1, 0.9])

    def test_zero_measure(self):
        z = SpikeSignal.zero(2.0)
        assert z.is_zero and z.s == 0 and z.lam == 2.0

    @pytest.mark.parametrize("supports", [[0.5, 0.2], [0.2, 0.2], [-0.1], [1.2]])
    def test_rejects_bad_supports(self, supports):
        with pytest.raises(DomainError):
            SpikeSignal(1.0, supports, np.ones(len(supports)))

    def test_length_mismatch(self):
        with pytest.raises(DomainError):
            SpikeSignal(1.0, [0.1, 0.2], [1.0])

    def test_immutable_arrays(self):
        sig = SpikeSignal(1.0, [0.1], [1.0])
        with pytest.raises(ValueError):
            sig.supports[0] = 0.3

    def test_from_unsorted(self):
        sig = SpikeSignal.from_unsorted(1.0, [0.7, 0.1], [2.0, 1.0])
        np.testing.assert_array_equal(sig.supports, [0.1, 0.7])
        np.testing.assert_array_equal(sig.coeffs, [1.0, 2.0])

    def test_disjoint_sum(self):
        a = SpikeSignal(1.0, [0.1], [1.0])
        b = SpikeSignal(1.0, [0.6], [1j])
        assert (a + b).s == 2
        with pytest.raises(DomainError):
            a + a


class TestFourierEval:
    def test_unit_spike_at_origin(self):
        sig = SpikeSignal(1.0, [0.0], [1.0])
        for w in (-3.0, 0.0, 0.37, 12.5):
            assert fourier_eval(sig, w) == pytest.approx(1.0)

    def test_half_shift(self):
        sig = SpikeSignal(1.0, [0.5], [2.0])
        assert fourier_eval(sig, 0.5) == pytest.approx(-2j, abs=1e-15)

    def test_single_spike_modulus(self, rng):
        c = complex(rng.standard_normal(), rng.standard_normal())
        sig = SpikeSignal(1.0, [rng.uniform()], [c])
        vals = fourier_eval(sig, rng.uniform(-5, 5, size=50))
        np.testing.assert_allclose(np.abs(vals), abs(c), rtol=1e-14)

    def test_vectorized_shape(self):
        sig = random_signal(3, seed=1)
        assert fourier_eval(sig, np.zeros((4, 2))).shape == (4, 2)
        assert isinstance(fourier_eval(sig, 0.1), complex)

    def test_zero_signal(self):
        assert fourier_eval(SpikeSignal.zero(1.0), 0.3) == 0

    def test_linearity(self, rng):
        for _ in range(50):
            a = random_signal(3, 1.0, 0.05, seed=rng)
            t = np.setdiff1d(np.round(rng.uniform(size=2), 6), a.supports)
            b = SpikeSignal.from_unsorted(1.0, t, rng.standard_normal(t.size) + 1j)
            w = rng.uniform(-4, 4, size=20)
            np.testing.assert_allclose(fourier_eval(a + b, w),
                                       fourier_eval(a, w) + fourier_eval(b, w), atol=1e-12)

    def test_conjugate_symmetry_for_real_coefficients(self, rng):
        sig = SpikeSignal(1.0, np.sort(rng.uniform(size=4)), rng.standard_normal(4))
        w = rng.uniform(0, 3, size=30)
        np.testing.assert_allclose(fourier_eval(sig, -w), np.conj(fourier_eval(sig, w)),
                                   atol=1e-13)


class TestZeroBound:
    def test_reference_value(self):
        assert zero_count_bound(2, 1.0, 0.25) == pytest.approx(7.7708, abs=1e-4)

    def test_factor_two_at_e6(self):
        s = 3
        omega = s / math.exp(6)
        assert zero_count_bound(s, 1.0, omega) == pytest.approx(2 * s, rel=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            zero_count_bound(1, 1.0, 2.0)


class TestCountRealZeros:
    def test_no_zeros(self):
        assert count_real_zeros(SpikeSignal(1.0, [0.0], [1.0]), 3.0) == 0

    def test_difference_of_spikes(self):
        sig = SpikeSignal(1.0, [0.0, 0.5], [1.0, -1.0])
        assert count_real_zeros(sig, 2.2) == 3

    def test_preconditions(self):
        with pytest.raises(DomainError):
            count_real_zeros(SpikeSignal.zero(1.0), 1.0)
        with pytest.raises(DomainError):
            count_real_zeros(SpikeSignal(1.0, [0.0], [1.0]), 1.0, grid_points=999)

    def test_random_signals_respect_bound(self, rng):
        for _ in range(20):
            s = int(rng.integers(1, 6))
            omega = rng.uniform(0.05, 0.4)
            sig = random_signal(s, 1.0, seed=rng)
            if s > omega:
                assert count_real_zeros(sig, omega) <= math.floor(zero_count_bound(s, 1.0, omega))


class TestClassDistance:
    def test_identical(self):
        a = random_signal(3, seed=0)
        rep = class_distance(a, a)
        assert rep.class_distance == pytest.approx(0, abs=1e-15)
        assert rep.aligned_phase == pytest.approx(1.0)
        assert rep.matched

    def test_rotation(self):
        a = random_signal(3, seed=0)
        rep = class_distance(a, a.scaled(1j))
        assert rep.class_distance == pytest.approx(0, abs=1e-14)
        assert abs(rep.aligned_phase) == pytest.approx(1.0)

    def test_moved_spike(self):
        a = SpikeSignal(1.0, [0.0], [1.0])
        b = SpikeSignal(1.0, [0.3], [1.0])
        assert class_distance(a, b).class_distance >= 0.3

    def test_cardinality_mismatch_counts_coefficients(self):
        a = SpikeSignal(1.0, [0.1, 0.5], [1.0, 2.0])
        b = SpikeSignal(1.0, [0.1], [1.0])
        assert class_distance(a, b).class_distance == pytest.approx(2.0)

    def test_zero_vs_zero(self):
        z = SpikeSignal.zero(1.0)
        assert class_distance(z, z).class_distance == 0.0

    @given(st.integers(0, 2**31 - 1), st.integers(0, 2**31 - 1))
    def test_symmetry(self, sa, sb):
        a = random_signal(3, 1.0, 0.1, seed=sa)
        b = random_signal(3, 1.0, 0.1, seed=sb)
        assert class_distance(a, b).class_distance == pytest.approx(
            class_distance(b, a).class_distance, rel=1e-12, abs=1e-15)

    @given(st.integers(0, 2**31 - 1), st.floats(0, 2 * np.pi))
    def test_zero_on_equivalent_pairs(self, seed, theta):
        a = random_signal(4, 1.0, 0.05, seed=seed)
        assert class_distance(a, a.scaled(np.exp(1j * theta))).class_distance < 1e-12


class TestRandomSignal:
    def test_zero(self):
        assert random_signal(0).is_zero

    def test_deterministic(self):
        a, b = random_signal(4, seed=11), random_signal(4, seed=11)
        np.testing.assert_array_equal(a.supports, b.supports)
        np.testing.assert_array_equal(a.coeffs, b.coeffs)

    def test_separation(self):
        sig = random_signal(3, 1.0, 0.2, seed=7)
        assert np.all(np.diff(sig.supports) >= 0.2 - 1e-15)

    def test_magnitudes_in_range(self):
        sig = random_signal(6, seed=3, coeff_magnitude_range=(0.5, 2.0))
        assert np.all((np.abs(sig.coeffs) >= 0.5) & (np.abs(sig.coeffs) <= 2.0))

    def test_impossible_separation(self):
        with pytest.raises(DomainError):
            random_signal(5, 1.0, 0.25, seed=0)


def test_linear_sampling_injectivity(rng):
    """Distinct sparse signals give distinct samples at enough points."""
    lam, omega = 1.0, 0.25
    for _ in range(50):
        s = int(rng.integers(1, 5))
        n = math.floor((2 + 12 / math.log(2 * s / (lam * omega))) * s) + 1
        w = np.arange(1, n + 1) * omega / n
        a = random_signal(s, lam, seed=rng)
        b = random_signal(s, lam, seed=rng)
        assert np.max(np.abs(fourier_eval(a, w) - fourier_eval(b, w))) > 1e-9
