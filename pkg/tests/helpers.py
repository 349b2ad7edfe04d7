"""Small independent reference implementations used as test oracles."""
import itertools
import math

import numpy as np


def expansion_by_enumeration(n, edges):
    """h(G) by explicit itertools subset enumeration (no bit tricks)."""
    if n <= 1:
        return math.inf
    best = math.inf
    edges = [tuple(e) for e in np.asarray(edges).tolist()]
    for size in range(1, n // 2 + 1):
        for W in itertools.combinations(range(n), size):
            inside = set(W)
            cut = sum((j in inside) != (k in inside) for j, k in edges)
            best = min(best, cut / size)
    return best


def dft_det(n, S, St):
    A = np.exp(2j * np.pi * np.outer(St, S) / n)
    return abs(np.linalg.det(A))


def random_unimodular(rng, size=None):
    return np.exp(2j * np.pi * rng.uniform(size=size))


def random_complex(rng, size=None, scale=1.0):
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))
