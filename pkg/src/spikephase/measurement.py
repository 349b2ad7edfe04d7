"""Sample-point embeddings and the intensity forward model."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .expander import RegularGraph

__all__ = [
    "VertexEmbedding",
    "MagnitudeData",
    "frequency_embedding",
    "time_embedding",
    "measure",
    "mu_tilde_eval",
]

FREQUENCY = "frequency"
TIME = "time"


@dataclass(frozen=True, eq=False)
class VertexEmbedding:
    """Sample location ``points[k]`` for each graph vertex ``k``.

    ``scale`` is the band limit ``omega`` for frequency embeddings and the
    support window ``lam`` for time embeddings. Time embeddings built on a
    cyclic grid of order ``modulus`` record it so vertices can be mapped to
    grid indices.
    """

    points: np.ndarray
    domain_tag: str
    scale: float
    modulus: int | None = None

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float).ravel()
        if self.domain_tag not in (FREQUENCY, TIME):
            raise DomainError(f"unknown domain tag {self.domain_tag!r}")
        if np.unique(p).size != p.size:
            raise DomainError("embedding points must be pairwise distinct")
        eps = 1e-12 * self.scale
        if self.domain_tag == FREQUENCY and p.size and np.abs(p).max() > self.scale + eps:
            raise DomainError("frequency points must lie in [-omega, omega]")
        if self.domain_tag == TIME and p.size and (
                p.min() < -eps or p.max() > 2 * self.scale + eps):
            raise DomainError("time points must lie in [0, 2*lam]")
        p.setflags(write=False)
        object.__setattr__(self, "points", p)

    @property
    def n(self) -> int:
        return int(self.points.size)

    def grid_indices(self) -> np.ndarray:
        """Cyclic grid index of every vertex of a time embedding."""
        if self.domain_tag != TIME or self.modulus is None:
            raise DomainError("grid indices only defined for modular time embeddings")
        k = np.rint(self.points * self.modulus / (2 * self.scale)).astype(np.int64)
        return k % self.modulus


@dataclass(frozen=True, eq=False)
class MagnitudeData:
    """Intensities ``|a_j|^2`` per vertex and ``|a_j - a_k|^2``,
    ``|a_j - i a_k|^2`` per edge ``j < k`` (rows of ``edges``)."""

    m0: np.ndarray
    m1: np.ndarray
    m2: np.ndarray
    edges: np.ndarray

    def __post_init__(self):
        arrays = {}
        for name in ("m0", "m1", "m2"):
            a = np.asarray(getattr(self, name), dtype=float).ravel()
            if np.any(a < 0) or not np.all(np.isfinite(a)):
                raise DomainError(f"{name} must be finite and nonnegative")
            a.setflags(write=False)
            arrays[name] = a
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if arrays["m1"].size != e.shape[0] or arrays["m2"].size != e.shape[0]:
            raise DomainError("m1 and m2 need one entry per edge")
        e.setflags(write=False)
        for name, a in arrays.items():
            object.__setattr__(self, name, a)
        object.__setattr__(self, "edges", e)

    @property
    def n(self) -> int:
        return int(self.m0.size)

    @property
    def total_count(self) -> int:
        """Number of measured reals ``|V| + 2|E|``."""
        return int(self.m0.size + self.m1.size + self.m2.size)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.m0, self.m1, self.m2])


def frequency_embedding(n: int, omega: float) -> VertexEmbedding:
    """Equispaced points ``(k+1) * omega / n`` for ``k = 0..n-1``."""
    if n < 1 or not omega > 0:
        raise DomainError("need n >= 1 and omega > 0")
    # (k+1)*omega/n can round one ulp past omega; clamp and pin the last point
    pts = np.minimum(np.arange(1, n + 1) * float(omega) / n, float(omega))
    pts[-1] = omega
    return VertexEmbedding(pts, FREQUENCY, float(omega))


def time_embedding(n: int, lam: float, modulus: int | None = None) -> VertexEmbedding:
    """Points ``2 lam k / modulus`` for ``k = 0..n-1`` (``modulus`` defaults to ``n``).

    With ``n = modulus + 1`` the last vertex sits at ``2 lam``, the periodic
    image of vertex 0.
    """
    modulus = n if modulus is None else int(modulus)
    if n < 1 or modulus < 1 or n > modulus + 1:
        raise DomainError("need 1 <= n <= modulus + 1")
    if not lam > 0:
        raise DomainError("lam must be positive")
    pts = 2.0 * lam * np.arange(n) / modulus
    return VertexEmbedding(pts, TIME, float(lam), modulus)


def measure(values, g: RegularGraph, noise: float = 0.0, seed=None) -> MagnitudeData:
    """Intensity measurements of the vertex values ``values`` on graph ``g``.

    ``noise > 0`` adds seeded Gaussian perturbations of that standard
    deviation to every intensity (clipped at zero).
    """
    a = np.asarray(values, dtype=complex).ravel()
    if a.size != g.n:
        raise DomainError(f"expected {g.n} vertex values, got {a.size}")
    j, k = g.edges[:, 0], g.edges[:, 1]
    m0 = np.abs(a) ** 2
    m1 = np.abs(a[j] - a[k]) ** 2
    m2 = np.abs(a[j] - 1j * a[k]) ** 2
    if noise:
        rng = np.random.default_rng(seed)
        m0 = np.maximum(m0 + noise * rng.standard_normal(m0.shape), 0.0)
        m1 = np.maximum(m1 + noise * rng.standard_normal(m1.shape), 0.0)
        m2 = np.maximum(m2 + noise * rng.standard_normal(m2.shape), 0.0)
    return MagnitudeData(m0, m1, m2, g.edges)


def mu_tilde_eval(freq_samples, lam: float, t):
    """Trigonometric polynomial ``sum_{k=1}^m f_k exp(i pi t k / lam)``.

    ``freq_samples[k-1]`` holds the Fourier sample at ``k * omega / m``.
    """
    f = np.asarray(freq_samples, dtype=complex).ravel()
    tt = np.asarray(t, dtype=float)
    k = np.arange(1, f.size + 1)
    # reduce t modulo the period first to keep the phases small
    tr = np.mod(tt, 2.0 * lam)
    out = np.exp(1j * np.pi * np.multiply.outer(tr, k) / lam) @ f
    return complex(out) if out.ndim == 0 else out
