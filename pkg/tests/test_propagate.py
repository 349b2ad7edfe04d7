import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spikephase.exceptions import DomainError, InconsistencyError
from spikephase.expander import (RegularGraph, complete_graph, petersen_graph,
                                 ramanujan_graph, random_regular)
from spikephase.measurement import MagnitudeData, VertexEmbedding, measure
from spikephase.propagate import (check_consistency, induced_subgraph, propagate_phases,
                                  recover_single_spike, relative_product, vanishing_threshold)
from spikephase.spikes import SpikeSignal, fourier_eval, random_signal
from tests.helpers import random_complex, random_unimodular

CYCLE4 = RegularGraph(4, 2, [(0, 1), (1, 2), (2, 3), (0, 3)])


class TestRelativeProduct:
    def test_equal_values(self):
        assert relative_product(1, 1, 0, 2) == pytest.approx(1)

    def test_two_and_i(self):
        assert relative_product(4, 1, 5, 9) == pytest.approx(-2j)

    def test_vanishing_endpoint(self):
        z = 0.3 - 1.2j
        r = abs(z) ** 2
        assert relative_product(0, r, r, r) == pytest.approx(0, abs=1e-15)

    @given(st.integers(0, 2**32 - 1))
    def test_identity(self, seed):
        rng = np.random.default_rng(seed)
        a, b = random_complex(rng, 2)
        r = relative_product(abs(a) ** 2, abs(b) ** 2, abs(a - b) ** 2, abs(a - 1j * b) ** 2)
        assert abs(r - a * np.conj(b)) <= 1e-12 * max(1.0, abs(a) * abs(b))

    def test_vectorized(self, rng):
        a, b = random_complex(rng, 30), random_complex(rng, 30)
        r = relative_product(abs(a) ** 2, abs(b) ** 2, abs(a - b) ** 2, abs(a - 1j * b) ** 2)
        np.testing.assert_allclose(r, a * np.conj(b), atol=1e-12)


class TestInducedSubgraph:
    def test_full(self):
        w, e = induced_subgraph(petersen_graph(), np.ones(10), 0.5)
        assert w.size == 10 and len(e) == 15

    def test_empty(self):
        w, e = induced_subgraph(petersen_graph(), np.zeros(10), 0.0)
        assert w.size == 0 and len(e) == 0

    def test_vanishing_vertices_cut_edges(self):
        # delta_0 - delta_{1/2} vanishes at even integer frequencies
        sig = SpikeSignal(1.0, [0.0, 0.5], [1.0, -1.0])
        a = fourier_eval(sig, np.array([1.0, 2.0, 3.0, 4.0]))
        data = measure(a, CYCLE4)
        w, e = induced_subgraph(CYCLE4, data.m0, vanishing_threshold(data.m0))
        assert w.tolist() == [0, 2]
        assert len(e) == 0

    def test_length_check(self):
        with pytest.raises(DomainError):
            induced_subgraph(petersen_graph(), np.ones(3), 0.1)


class TestPropagate:
    def test_all_ones(self):
        g = random_regular(20, 3, seed=0)
        ph = propagate_phases(g, measure(np.ones(20), g))
        assert ph.size == 20
        np.testing.assert_allclose(ph.values, 1.0, atol=1e-15)

    def test_anchor_convention(self, rng):
        g = petersen_graph()
        ph = propagate_phases(g, measure(random_complex(rng, 10), g))
        a = ph.values[ph.component.tolist().index(ph.anchor)]
        assert a.imag == 0 and a.real > 0
        assert ph.anchor == ph.component[0]

    def test_recovers_up_to_global_phase(self, rng):
        g = ramanujan_graph(60, 3, seed=1)
        sig = random_signal(3, 1.0, 0.2, seed=rng)
        a = fourier_eval(sig, np.arange(1, 61) * 0.25 / 60)
        ph = propagate_phases(g, measure(a, g))
        zeta = ph.values[0] / a[ph.component[0]]
        assert abs(zeta) == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(ph.values, zeta * a[ph.component], atol=1e-10)

    @given(st.integers(0, 2**32 - 1))
    def test_anchoring_removes_global_phase(self, seed):
        rng = np.random.default_rng(seed)
        g = petersen_graph()
        a = random_complex(rng, 10)
        p1 = propagate_phases(g, measure(a, g))
        p2 = propagate_phases(g, measure(random_unimodular(rng) * a, g))
        np.testing.assert_array_equal(p1.component, p2.component)
        assert p1.anchor == p2.anchor
        np.testing.assert_allclose(p1.values, p2.values, atol=1e-12)

    def test_component_is_maximal(self, rng):
        g = random_regular(40, 3, seed=3)
        a = random_complex(rng, 40)
        a[rng.choice(40, 12, replace=False)] = 0
        data = measure(a, g)
        ph = propagate_phases(g, data)
        inside = set(ph.component.tolist())
        alive = data.m0 > vanishing_threshold(data.m0) ** 2
        for j, k in g.edges.tolist():
            if alive[j] and alive[k]:
                assert (j in inside) == (k in inside)

    def test_remeasure_certificate(self, rng):
        g = random_regular(40, 4, seed=5)
        a = random_complex(rng, 40)
        data = measure(a, g)
        ph = propagate_phases(g, data)
        full = np.zeros(40, dtype=complex)
        full[ph.component] = ph.values
        again = measure(full, g)
        np.testing.assert_allclose(again.as_vector(), data.as_vector(), rtol=1e-9, atol=1e-12)

    def test_all_zero(self):
        g = petersen_graph()
        ph = propagate_phases(g, measure(np.zeros(10), g))
        assert ph.is_empty and ph.anchor is None

    def test_tie_break(self):
        # vertices 1 and 3 vanish on the 4-cycle: two singleton components
        a = np.array([1.0, 0.0, 2.0, 0.0])
        ph = propagate_phases(CYCLE4, measure(a, CYCLE4))
        assert ph.component.tolist() == [0]
        assert ph.component_sizes == [1, 1]

    def test_inconsistent_data(self, rng):
        g = petersen_graph()
        data = measure(random_complex(rng, 10), g)
        m1 = data.m1.copy()
        m1[4] *= 1.1
        bad = MagnitudeData(data.m0, m1, data.m2, data.edges)
        with pytest.raises(InconsistencyError):
            propagate_phases(g, bad)

    def test_check_consistency_passes_on_truth(self, rng):
        g = petersen_graph()
        a = random_complex(rng, 10)
        assert check_consistency(a, np.arange(10), measure(a, g)) < 1e-12


class TestSingleSpike:
    EMB = VertexEmbedding([0.0, 1.0], "frequency", 1.0)

    def _data(self, sig):
        return measure(fourier_eval(sig, self.EMB.points), complete_graph(2))

    def test_zero(self):
        z = MagnitudeData([0.0, 0.0], [0.0], [0.0], [[0, 1]])
        assert recover_single_spike(z, self.EMB, 0.25).is_zero

    def test_unit_at_origin(self):
        rec = recover_single_spike(self._data(SpikeSignal(0.25, [0.0], [1.0])), self.EMB, 0.25)
        assert rec.supports[0] == pytest.approx(0, abs=1e-15)
        assert abs(rec.coeffs[0]) == pytest.approx(1)

    def test_reference(self):
        data = self._data(SpikeSignal(0.25, [0.2], [2.0]))
        r = relative_product(*data.m0, data.m1[0], data.m2[0]) / data.m0[1]
        assert r == pytest.approx(np.exp(0.4j * np.pi))
        rec = recover_single_spike(data, self.EMB, 0.25)
        assert rec.supports[0] == pytest.approx(0.2, abs=1e-12)
        assert abs(rec.coeffs[0]) == pytest.approx(2.0)

    def test_band_condition(self):
        data = self._data(SpikeSignal(0.6, [0.2], [1.0]))
        with pytest.raises(DomainError):
            recover_single_spike(data, self.EMB, 0.6)

    def test_one_sided_zero(self):
        bad = MagnitudeData([1.0, 0.0], [1.0], [1.0], [[0, 1]])
        with pytest.raises(InconsistencyError):
            recover_single_spike(bad, self.EMB, 0.25)
