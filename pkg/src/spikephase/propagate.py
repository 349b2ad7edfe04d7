"""Phase propagation over the graph of non-vanishing vertices."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError, InconsistencyError
from .expander import RegularGraph, component_sizes, largest_component
from .measurement import MagnitudeData, VertexEmbedding
from .spikes import SpikeSignal

__all__ = [
    "PhaseAssignment",
    "relative_product",
    "vanishing_threshold",
    "induced_subgraph",
    "propagate_phases",
    "check_consistency",
    "recover_single_spike",
    "DEFAULT_TAU_REL",
    "CONSISTENCY_TOL",
]

DEFAULT_TAU_REL = 1e-8
CONSISTENCY_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class PhaseAssignment:
    """Values on the component ``component`` (sorted vertex indices),
    fixed up to one global unimodular factor by making ``values`` real and
    nonnegative at ``anchor``."""

    component: np.ndarray
    values: np.ndarray
    anchor: int | None
    component_sizes: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return int(self.component.size)

    @property
    def is_empty(self) -> bool:
        return self.component.size == 0

    def as_dict(self) -> dict:
        return dict(zip(self.component.tolist(), self.values.tolist()))


def relative_product(m0_j, m0_k, m1_jk, m2_jk):
    """Recover ``a_j * conj(a_k)`` from the four intensities of edge ``j < k``.

    Vectorized over array arguments.
    """
    s = np.asarray(m0_j, dtype=float) + np.asarray(m0_k, dtype=float)
    out = 0.5 * (s - np.asarray(m1_jk, dtype=float)) + 0.5j * (s - np.asarray(m2_jk, dtype=float))
    return complex(out) if np.ndim(out) == 0 else out


def vanishing_threshold(m0, tau_rel: float = DEFAULT_TAU_REL) -> float:
    """Magnitude below which a vertex is treated as a zero of the transform."""
    m0 = np.asarray(m0, dtype=float)
    if m0.size == 0:
        return 0.0
    return tau_rel * math.sqrt(float(m0.max()))


def induced_subgraph(g: RegularGraph, m0, threshold: float):
    """Vertices with ``m0 > threshold**2`` and the edges between them."""
    m0 = np.asarray(m0, dtype=float)
    if m0.size != g.n:
        raise DomainError(f"expected {g.n} intensities, got {m0.size}")
    alive = m0 > threshold ** 2
    w = np.flatnonzero(alive)
    e = g.edges[alive[g.edges[:, 0]] & alive[g.edges[:, 1]]]
    return w, e


def check_consistency(values, component, data: MagnitudeData, rtol: float = CONSISTENCY_TOL):
    """Largest relative violation of the intensity constraints on ``component``.

    Raises :class:`InconsistencyError` when it exceeds ``rtol``.
    """
    comp = np.asarray(component, dtype=np.int64)
    if comp.size == 0:
        return 0.0
    full = np.zeros(data.n, dtype=complex)
    full[comp] = values
    inside = np.zeros(data.n, dtype=bool)
    inside[comp] = True
    m0 = data.m0
    err0 = np.abs(np.abs(full[comp]) ** 2 - m0[comp]) / np.maximum(m0[comp], 1e-300)
    worst = float(err0.max())
    sel = inside[data.edges[:, 0]] & inside[data.edges[:, 1]]
    if np.any(sel):
        j, k = data.edges[sel, 0], data.edges[sel, 1]
        scale = m0[j] + m0[k]
        r1 = np.abs(np.abs(full[j] - full[k]) ** 2 - data.m1[sel]) / scale
        r2 = np.abs(np.abs(full[j] - 1j * full[k]) ** 2 - data.m2[sel]) / scale
        worst = max(worst, float(r1.max()), float(r2.max()))
    if worst > rtol:
        raise InconsistencyError(
            f"intensity data not realizable: relative violation {worst:.3e} > {rtol:.1e}")
    return worst


def propagate_phases(g: RegularGraph, data: MagnitudeData, threshold: float | None = None,
                     tau_rel: float = DEFAULT_TAU_REL,
                     rtol: float = CONSISTENCY_TOL) -> PhaseAssignment:
    """Assign complex values on the largest component of non-vanishing vertices.

    Breadth-first from the smallest vertex of the component, whose value is
    fixed to ``sqrt(m0)``; each newly reached vertex gets
    ``r * value[parent] / m0[parent]`` with ``r`` the recovered relative
    product along the tree edge.
    """
    if data.n != g.n:
        raise DomainError("data and graph disagree on the vertex count")
    if threshold is None:
        threshold = vanishing_threshold(data.m0, tau_rel)
    w, _ = induced_subgraph(g, data.m0, threshold)
    if w.size == 0:
        return PhaseAssignment(np.zeros(0, dtype=np.int64), np.zeros(0, dtype=complex), None, [])
    alive_edges = g.edges[np.isin(g.edges[:, 0], w) & np.isin(g.edges[:, 1], w)]
    comp = largest_component(g.n, alive_edges, w)
    sizes = component_sizes(g.n, alive_edges, w)

    in_comp = np.zeros(g.n, dtype=bool)
    in_comp[comp] = True
    # per-vertex list of (neighbour, edge row) restricted to the component
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for row, (j, k) in enumerate(data.edges.tolist()):
        if in_comp[j] and in_comp[k]:
            adj[j].append((k, row))
            adj[k].append((j, row))
    r = relative_product(data.m0[data.edges[:, 0]], data.m0[data.edges[:, 1]],
                         data.m1, data.m2)
    r = np.atleast_1d(r)

    anchor = int(comp[0])
    vals = np.zeros(g.n, dtype=complex)
    vals[anchor] = math.sqrt(data.m0[anchor])
    seen = np.zeros(g.n, dtype=bool)
    seen[anchor] = True
    queue = deque([anchor])
    while queue:
        k = queue.popleft()
        for j, row in sorted(adj[k]):
            if seen[j]:
                continue
            # r[row] = a_lo * conj(a_hi) for the edge (lo, hi)
            rel = r[row] if j < k else np.conj(r[row])
            vals[j] = rel * vals[k] / data.m0[k]
            seen[j] = True
            queue.append(j)

    values = vals[comp]
    check_consistency(values, comp, data, rtol)
    return PhaseAssignment(comp, values, anchor, sizes)


def recover_single_spike(data: MagnitudeData, embedding: VertexEmbedding, lam: float,
                         threshold: float = 0.0) -> SpikeSignal:
    """Recover ``c delta_t`` up to phase from four intensities on one edge.

    Requires two frequency points with ``omega * lam < 1/2`` so that
    ``t (v_1 - v_2)`` determines ``t`` uniquely.
    """
    if data.n != 2 or data.edges.shape[0] != 1 or embedding.n != 2:
        raise DomainError("single-spike recovery needs the two-vertex, one-edge graph")
    if embedding.scale * lam >= 0.5:
        raise DomainError("single-spike recovery needs omega * lam < 1/2")
    m0 = data.m0
    zero = m0 <= threshold ** 2
    if zero.all():
        return SpikeSignal.zero(lam)
    if zero.any():
        raise InconsistencyError("a single spike cannot vanish at exactly one frequency")
    j, k = (int(x) for x in data.edges[0])
    rel = relative_product(m0[j], m0[k], data.m1[0], data.m2[0])
    quotient = rel / m0[k]              # a_j / a_k
    delta = embedding.points[j] - embedding.points[k]
    if delta == 0:
        raise DomainError("sample points must differ")
    t0 = -np.angle(quotient) / (2 * np.pi * delta)
    period = 1.0 / abs(delta)           # > 2 lam, so one candidate lands in [0, lam]
    cands = t0 + period * np.arange(-1, 2)
    gap = np.maximum(0.0, np.maximum(-cands, cands - lam))
    t = float(np.clip(cands[np.argmin(gap)], 0.0, lam))
    return SpikeSignal(lam, [t], [math.sqrt(m0[j])])
