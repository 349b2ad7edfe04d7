"""Regular graphs, normalized Laplacian spectra and expansion certificates."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .exceptions import DomainError, GenerationError, SizeError

__all__ = [
    "RegularGraph",
    "SpectralReport",
    "SPECTRAL_TOL",
    "normalized_laplacian_spectrum",
    "spectral_gap",
    "ramanujan_threshold",
    "is_ramanujan",
    "expansion_constant_exact",
    "cheeger_check",
    "random_regular",
    "ramanujan_graph",
    "largest_component_after_removal",
    "removal_budget",
    "complete_graph",
    "petersen_graph",
    "circular_ladder",
]

SPECTRAL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class RegularGraph:
    """Simple connected ``d``-regular graph on vertices ``0..n-1``.

    ``edges`` is an ``(|E|, 2)`` integer array of pairs ``j < k`` sorted
    lexicographically.
    """

    n: int
    d: int
    edges: np.ndarray

    def __post_init__(self):
        n, d = int(self.n), int(self.d)
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if n < 0 or d < 0:
            raise DomainError("n and d must be nonnegative")
        e = np.sort(e, axis=1)
        e = e[np.lexsort((e[:, 1], e[:, 0]))]
        if e.size:
            if e.min() < 0 or e.max() >= n:
                raise DomainError("edge endpoint out of range")
            if np.any(e[:, 0] == e[:, 1]):
                raise DomainError("graph has a loop")
            if np.any(np.all(np.diff(e, axis=0) == 0, axis=1)):
                raise DomainError("graph has a repeated edge")
        deg = np.bincount(e.ravel(), minlength=n)
        if np.any(deg != d):
            raise DomainError(f"graph is not {d}-regular")
        if n > 1 and _n_components(n, e) != 1:
            raise DomainError("graph is not connected")
        e.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "edges", e)

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        a[self.edges[:, 0], self.edges[:, 1]] = 1.0
        a[self.edges[:, 1], self.edges[:, 0]] = 1.0
        return a

    def neighbors(self) -> list[list[int]]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for j, k in self.edges.tolist():
            nbrs[j].append(k)
            nbrs[k].append(j)
        for lst in nbrs:
            lst.sort()
        return nbrs

    def __eq__(self, other):
        if not isinstance(other, RegularGraph):
            return NotImplemented
        return (self.n == other.n and self.d == other.d
                and np.array_equal(self.edges, other.edges))

    def __hash__(self):
        return hash((self.n, self.d, self.edges.tobytes()))


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: np.ndarray
    lambda1: float
    ramanujan: bool


def _n_components(n, edges) -> int:
    if n == 0:
        return 0
    m = coo_matrix((np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(n, n))
    return connected_components(m, directed=False)[0]


def _laplacian(g: RegularGraph) -> np.ndarray:
    if g.d == 0:
        return np.eye(g.n)
    return np.eye(g.n) - g.adjacency() / g.d


def ramanujan_threshold(d: int) -> float:
    """Lower bound ``1 - 2 sqrt(d-1) / d`` on the spectral gap."""
    return 1.0 - 2.0 * math.sqrt(d - 1) / d


def normalized_laplacian_spectrum(g: RegularGraph) -> SpectralReport:
    """Full ascending spectrum of ``I - A/d`` via a dense symmetric eigensolve."""
    if g.n == 0:
        return SpectralReport(np.zeros(0), math.inf, False)
    ev = scipy.linalg.eigvalsh(_laplacian(g))
    lam1 = float(ev[1]) if g.n > 1 else math.inf
    ram = g.d >= 3 and lam1 >= ramanujan_threshold(g.d) - SPECTRAL_TOL
    return SpectralReport(ev, lam1, bool(ram))


def spectral_gap(g: RegularGraph) -> float:
    """Second-smallest Laplacian eigenvalue, computing only the bottom pair."""
    if g.n < 2:
        return math.inf
    ev = scipy.linalg.eigh(_laplacian(g), eigvals_only=True, subset_by_index=[0, 1])
    return float(ev[1])


def is_ramanujan(g: RegularGraph) -> bool:
    if g.d < 3:
        raise DomainError("Ramanujan certificate needs d >= 3")
    return spectral_gap(g) >= ramanujan_threshold(g.d) - SPECTRAL_TOL


def expansion_constant_exact(g: RegularGraph) -> float:
    """Minimum of ``|boundary(W)| / |W|`` over nonempty ``W`` with
    ``|W| <= n/2``, by scanning all ``2**n`` vertex subsets."""
    n = g.n
    if n <= 1:
        return math.inf
    if n > 20:
        raise SizeError(f"exhaustive expansion constant limited to n <= 20 (got {n})")
    masks = np.arange(1, 1 << n, dtype=np.int64)
    size = np.zeros(masks.shape, dtype=np.int64)
    for v in range(n):
        size += (masks >> v) & 1
    cut = np.zeros(masks.shape, dtype=np.int64)
    for j, k in g.edges.tolist():
        cut += ((masks >> j) ^ (masks >> k)) & 1
    ok = 2 * size <= n
    return float(np.min(cut[ok] / size[ok]))


def cheeger_check(g: RegularGraph) -> bool:
    """True iff ``lambda_1 <= (2/d) h`` holds within the spectral tolerance."""
    if g.n == 0:
        raise DomainError("Cheeger inequality needs a nonempty graph")
    h = expansion_constant_exact(g)
    if g.n == 1:
        return True
    lam1 = normalized_laplacian_spectrum(g).lambda1
    return lam1 <= 2.0 / g.d * h + SPECTRAL_TOL


def _pair_stubs(n, d, rng):
    stubs = np.repeat(np.arange(n), d)
    rng.shuffle(stubs)
    e = np.sort(stubs.reshape(-1, 2), axis=1)
    if np.any(e[:, 0] == e[:, 1]):
        return None
    keys = e[:, 0] * n + e[:, 1]
    if np.unique(keys).size != keys.size:
        return None
    if _n_components(n, e) != 1:
        return None
    return e


def random_regular(n: int, d: int, seed=None, max_attempts: int = 10_000) -> RegularGraph:
    """Uniform simple connected ``d``-regular graph by the configuration model.

    Stub pairings containing a loop, a repeated edge, or more than one
    component are rejected and redrawn. ``seed`` may be an int or a
    :class:`numpy.random.Generator`.
    """
    if n * d % 2:
        raise DomainError(f"n*d must be even (n={n}, d={d})")
    if not 0 <= d < n:
        raise DomainError(f"need 0 <= d < n (n={n}, d={d})")
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        e = _pair_stubs(n, d, rng)
        if e is not None:
            return RegularGraph(n, d, e)
    raise GenerationError(f"no simple connected {d}-regular graph on {n} vertices "
                          f"after {max_attempts} attempts")


def ramanujan_graph(n: int, d: int, seed=None, max_attempts: int = 200,
                    pairing_attempts: int = 10_000) -> RegularGraph:
    """Rejection-sample random regular graphs until one is certified Ramanujan."""
    if d < 3:
        raise DomainError("Ramanujan graphs need d >= 3")
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        g = random_regular(n, d, rng, pairing_attempts)
        if is_ramanujan(g):
            return g
    raise GenerationError(f"no Ramanujan graph found for n={n}, d={d} "
                          f"in {max_attempts} candidates")


@lru_cache(maxsize=32)
def cached_ramanujan_graph(n: int, d: int, seed: int) -> RegularGraph:
    return ramanujan_graph(n, d, seed)


def largest_component(n: int, edges, vertices) -> np.ndarray:
    """Largest connected component of the subgraph induced by ``vertices``.

    Ties go to the component containing the smallest vertex index.
    """
    vertices = np.asarray(sorted(set(int(v) for v in vertices)), dtype=np.int64)
    if vertices.size == 0:
        return vertices
    inside = np.zeros(n, dtype=bool)
    inside[vertices] = True
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    e = e[inside[e[:, 0]] & inside[e[:, 1]]]
    m = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
    _, labels = connected_components(m, directed=False)
    labels = labels[vertices]
    counts = np.bincount(labels)
    best = counts.max()
    # vertices are sorted, so the first label hitting the max count owns the
    # smallest index among tied components
    winner = next(lab for lab in labels if counts[lab] == best)
    return vertices[labels == winner]


def component_sizes(n: int, edges, vertices) -> list[int]:
    vertices = np.asarray(sorted(set(int(v) for v in vertices)), dtype=np.int64)
    if vertices.size == 0:
        return []
    inside = np.zeros(n, dtype=bool)
    inside[vertices] = True
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    e = e[inside[e[:, 0]] & inside[e[:, 1]]]
    m = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
    _, labels = connected_components(m, directed=False)
    counts = np.bincount(labels[vertices])
    return sorted(counts[counts > 0].tolist(), reverse=True)


def largest_component_after_removal(g: RegularGraph, removed_vertices) -> np.ndarray:
    """Vertex set of the largest component left after deleting
    ``removed_vertices`` and their incident edges."""
    removed = set(int(v) for v in removed_vertices)
    if any(v < 0 or v >= g.n for v in removed):
        raise DomainError("removed vertex out of range")
    keep = [v for v in range(g.n) if v not in removed]
    return largest_component(g.n, g.edges, keep)


def removal_budget(n: int, d: int) -> float:
    """Number of vertices that may be deleted from a Ramanujan graph while
    keeping a component of at least ``2n/3`` vertices (strict bound).

    Each deleted vertex costs at most ``d`` edges out of the edge budget
    ``(d/6 - sqrt(d-1)/3) n``.
    """
    return (d / 6.0 - math.sqrt(d - 1) / 3.0) * n / d


def complete_graph(n: int) -> RegularGraph:
    e = [(j, k) for j in range(n) for k in range(j + 1, n)]
    return RegularGraph(n, n - 1, np.array(e, dtype=np.int64).reshape(-1, 2))


def petersen_graph() -> RegularGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return RegularGraph(10, 3, np.array(outer + spokes + inner))


def circular_ladder(k: int) -> RegularGraph:
    """Prism graph over the cycle ``C_k`` (``2k`` vertices, 3-regular)."""
    e = []
    for i in range(k):
        e.append((i, (i + 1) % k))
        e.append((k + i, k + (i + 1) % k))
        e.append((i, k + i))
    return RegularGraph(2 * k, 3, np.array(e))
