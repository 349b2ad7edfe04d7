"""Partial DFT systems over prime cyclic groups and the oversampling inverse."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import DomainError, InconsistencyError, RankDeficiencyError

__all__ = [
    "PartialDFTSystem",
    "ResamplingResult",
    "is_prime",
    "partial_dft_matrix",
    "forward_resampling",
    "invert_resampling",
]

RESIDUAL_TOL = 1e-8
RANK_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PartialDFTSystem:
    """Matrix ``A[j, k] = exp(2 pi i S_tilde[j] S[k] / n)``."""

    n: int
    S: np.ndarray
    S_tilde: np.ndarray
    matrix: np.ndarray

    @property
    def shape(self):
        return self.matrix.shape


@dataclass(frozen=True)
class ResamplingResult:
    samples: np.ndarray
    residual: float
    condition: float
    n_observations: int


def is_prime(n: int) -> bool:
    n = int(n)
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for f in range(3, math.isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


def _check_indices(idx, n, name):
    a = np.asarray(idx, dtype=np.int64).ravel()
    if a.size and (a.min() < 0 or a.max() >= n):
        raise DomainError(f"{name} must be a subset of 0..{n - 1}")
    return a


def partial_dft_matrix(n: int, S, S_tilde) -> PartialDFTSystem:
    """Rows indexed by ``S_tilde``, columns by ``S`` (each sorted ascending).

    Exponents are reduced modulo ``n`` in integer arithmetic before the
    complex exponential is taken.
    """
    S = np.unique(_check_indices(S, n, "S"))
    St = np.unique(_check_indices(S_tilde, n, "S_tilde"))
    return PartialDFTSystem(n, S, St, _dft_block(n, St, S))


def _dft_block(n, rows, cols):
    expo = np.multiply.outer(rows, cols) % n
    return np.exp(2j * np.pi * expo / n)


def forward_resampling(freq_samples, n: int, grid_indices) -> np.ndarray:
    """Oversampled values ``sum_{k=1}^m f_k exp(2 pi i j k / n)`` at the
    given grid indices ``j`` (duplicates and any order allowed)."""
    f = np.asarray(freq_samples, dtype=complex).ravel()
    rows = _check_indices(grid_indices, n, "grid_indices")
    return _dft_block(n, rows, np.arange(1, f.size + 1)) @ f


def invert_resampling(observed, grid_indices, n: int, m: int | None = None,
                      residual_tol: float = RESIDUAL_TOL) -> ResamplingResult:
    """Recover the ``m`` frequency samples from oversampled values.

    Solves the ``|K| x m`` system with source indices ``1..m`` in the least
    squares sense by a column-pivoted QR factorization. Needs ``n = 2m+1``
    prime and at least ``m`` distinct observed grid indices; repeated
    indices are allowed and simply add rows.
    """
    n = int(n)
    if m is None:
        m = (n - 1) // 2
    if n != 2 * m + 1:
        raise DomainError(f"grid order must be 2m+1 (n={n}, m={m})")
    if not is_prime(n):
        raise DomainError(
            f"grid order n={n} is not prime; the partial Fourier inverse is only "
            "guaranteed for prime n")
    y = np.asarray(observed, dtype=complex).ravel()
    rows = _check_indices(grid_indices, n, "grid_indices")
    if rows.size != y.size:
        raise DomainError("one observation per grid index required")
    if np.unique(rows).size < m:
        raise RankDeficiencyError(
            f"underdetermined: {np.unique(rows).size} distinct observations < m={m}")
    ynorm = float(np.linalg.norm(y))
    if ynorm == 0:
        return ResamplingResult(np.zeros(m, dtype=complex), 0.0, 1.0, int(rows.size))
    A = _dft_block(n, rows, np.arange(1, m + 1))
    q, r, piv = scipy.linalg.qr(A, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag[-1] <= RANK_TOL * diag[0]:
        raise RankDeficiencyError("partial Fourier system is numerically singular")
    z = scipy.linalg.solve_triangular(r, q.conj().T @ y)
    x = np.empty(m, dtype=complex)
    x[piv] = z
    residual = float(np.linalg.norm(A @ x - y)) / ynorm
    if residual > residual_tol:
        raise InconsistencyError(
            f"oversampled values are not a degree-{m} trigonometric polynomial "
            f"(relative residual {residual:.3e})")
    return ResamplingResult(x, residual, float(diag[0] / diag[-1]), int(rows.size))
