"""scikit-learn style front end.

``IntensityMeasurement`` turns rows of complex vertex values into flat
intensity vectors ``[m0 | m1 | m2]``. ``SpikeRetriever`` fits a spike
signal to one intensity measurement and predicts its Fourier transform.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .expander import RegularGraph
from .measurement import MagnitudeData, VertexEmbedding, measure
from .pipeline import ExperimentConfig, end_to_end_recover
from .propagate import DEFAULT_TAU_REL
from .spikes import SpikeSignal, class_distance, fourier_eval
from .validation import (check_complex_array, check_graph, check_measurement,
                         check_positive)

__all__ = ["IntensityMeasurement", "SpikeRetriever"]


class IntensityMeasurement(TransformerMixin, BaseEstimator):
    """Intensity measurements of vertex values along a regular graph.

    Parameters
    ----------
    graph : RegularGraph
        Measurement graph. Each row of ``X`` holds one value per vertex.
    noise : float
        Standard deviation of additive Gaussian noise on every intensity.
    random_state : int or None
        Seed for the noise.
    """

    def __init__(self, graph: RegularGraph | None = None, noise: float = 0.0,
                 random_state: int | None = None):
        self.graph = graph
        self.noise = noise
        self.random_state = random_state

    def fit(self, X=None, y=None):
        g = check_graph(self.graph)
        if X is not None:
            X = check_complex_array(X)
            if X.shape[1] != g.n:
                raise ValueError(f"X has {X.shape[1]} columns, graph has {g.n} vertices")
        self.n_features_in_ = g.n
        self.n_outputs_ = (g.d + 1) * g.n
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "n_features_in_")
        X = check_complex_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} columns, expected {self.n_features_in_}")
        rng = np.random.default_rng(self.random_state)
        rows = [measure(x, self.graph, noise=self.noise, seed=rng).as_vector() for x in X]
        return np.vstack(rows) if rows else np.empty((0, self.n_outputs_))

    def to_data(self, X) -> list[MagnitudeData]:
        """Structured counterpart of :meth:`transform`."""
        check_is_fitted(self, "n_features_in_")
        X = check_complex_array(X)
        rng = np.random.default_rng(self.random_state)
        return [measure(x, self.graph, noise=self.noise, seed=rng) for x in X]


class SpikeRetriever(BaseEstimator):
    """Recover a spike signal, up to a global phase, from intensity data.

    The grid order is read from the embedding passed to :meth:`fit`, so the
    same estimator works for any size.

    Parameters
    ----------
    s : int
        Number of spikes.
    lam : float
        Support window ``[0, lam]``.
    omega : float
        Frequency band ``[0, omega]`` of the underlying samples.
    tau_rel : float
        Relative vanishing threshold for vertex intensities.
    polish : bool
        Refine the Prony estimate by nonlinear least squares.
    """

    def __init__(self, s: int = 1, lam: float = 1.0, omega: float = 0.25,
                 tau_rel: float = DEFAULT_TAU_REL, polish: bool = True):
        self.s = s
        self.lam = lam
        self.omega = omega
        self.tau_rel = tau_rel
        self.polish = polish

    def _config(self, graph: RegularGraph, embedding: VertexEmbedding) -> ExperimentConfig:
        check_positive(self.lam, "lam")
        check_positive(self.omega, "omega")
        if not isinstance(self.s, (int, np.integer)) or self.s < 0:
            raise ValueError(f"s must be a nonnegative integer, got {self.s!r}")
        return ExperimentConfig(s=int(self.s), lam=float(self.lam), omega=float(self.omega),
                                d=graph.d, tau_rel=self.tau_rel,
                                n_override=int(embedding.modulus), polish=self.polish)

    def fit(self, X: MagnitudeData, y=None, *, graph: RegularGraph,
            embedding: VertexEmbedding):
        graph = check_graph(graph)
        X = check_measurement(X, graph, embedding)
        config = self._config(graph, embedding)
        signal, diag = end_to_end_recover(graph, embedding, X, config)
        self.signal_ = signal
        self.supports_ = signal.supports.copy()
        self.coef_ = signal.coeffs.copy()
        self.phases_ = diag.phases
        self.diagnostics_ = diag
        self.n_features_in_ = graph.n
        return self

    def predict(self, omega) -> np.ndarray:
        """Fourier transform of the fitted signal at the given frequencies."""
        check_is_fitted(self, "signal_")
        return np.asarray(fourier_eval(self.signal_, np.asarray(omega, dtype=float)))

    def score(self, signal: SpikeSignal, y=None) -> float:
        """Negative class distance to a reference signal (higher is better)."""
        check_is_fitted(self, "signal_")
        return -class_distance(signal, self.signal_).class_distance
