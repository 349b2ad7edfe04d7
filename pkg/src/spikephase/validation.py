"""Input checks for the estimator front end.

scikit-learn's ``check_array`` refuses complex input, so vertex values go
through :func:`check_complex_array` instead.
"""
from __future__ import annotations

import numbers

import numpy as np

from .exceptions import DomainError
from .expander import RegularGraph
from .measurement import MagnitudeData, VertexEmbedding


def check_complex_array(X, ensure_2d: bool = True, name: str = "X") -> np.ndarray:
    try:
        a = np.asarray(X, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name} must be numeric: {exc}") from exc
    if ensure_2d:
        if a.ndim == 1:
            raise DomainError(
                f"{name} must be 2D (n_samples, n_vertices); reshape a single "
                "vector with X.reshape(1, -1)")
        if a.ndim != 2:
            raise DomainError(f"{name} must be 2D, got {a.ndim}D")
    if not np.all(np.isfinite(a)):
        raise DomainError(f"{name} contains NaN or infinity")
    return a


def check_positive(value, name: str, integer: bool = False):
    kind = numbers.Integral if integer else numbers.Real
    if not isinstance(value, kind) or isinstance(value, bool) or not value > 0:
        raise DomainError(f"{name} must be a positive {'integer' if integer else 'number'}, "
                          f"got {value!r}")
    return value


def check_graph(graph) -> RegularGraph:
    if not isinstance(graph, RegularGraph):
        raise DomainError(f"expected a RegularGraph, got {type(graph).__name__}")
    return graph


def check_measurement(X, graph: RegularGraph, embedding: VertexEmbedding) -> MagnitudeData:
    if not isinstance(X, MagnitudeData):
        raise DomainError(f"expected MagnitudeData, got {type(X).__name__}")
    if X.n != graph.n or embedding.n != graph.n:
        raise DomainError("graph, embedding and data disagree on the vertex count")
    if not np.array_equal(X.edges, graph.edges):
        raise DomainError("data edge order does not match the graph")
    if embedding.modulus is None:
        raise DomainError("recovery needs a time embedding on a prime-order grid")
    return X
