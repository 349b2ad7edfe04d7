"""Prony extraction of spike supports and coefficients from equispaced
Fourier samples, plus the modulation/shift operators behind it.

Sample convention: ``values[k] = mu_hat((k + 1) * step)``, so that
``values[k] = sum_j c_j z_j**(k+1)`` with nodes ``z_j = exp(-2 pi i t_j step)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .exceptions import (DomainError, InconsistencyError, NumericalError,
                         OffCircleError, RankDeficiencyError)
from .spikes import SpikeSignal

__all__ = [
    "UniformSamples",
    "PronyResult",
    "apply_modulation",
    "apply_cyclic_shift",
    "apply_cyclic_shift_adjoint",
    "apply_annihilation_map",
    "annihilating_polynomial",
    "hankel_rank",
    "polynomial_roots",
    "roots_to_supports",
    "coefficients_from_supports",
    "polish_spikes",
    "default_lag",
    "prony",
]

RANK_TOL = 1e-13
CIRCLE_TOL = 1e-6
SUPPORT_TOL = 1e-9
# raw roots only seed the polish, so they get a looser acceptance window
SEED_TOL = 1e-3


@dataclass(frozen=True, eq=False)
class UniformSamples:
    step: float
    values: np.ndarray
    lam: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).ravel()
        if v.size < 1:
            raise DomainError("need at least one sample")
        if not self.step > 0:
            raise DomainError("step must be positive")
        if not self.step * self.lam < 0.5:
            raise DomainError(
                f"step*lam = {self.step * self.lam} must be < 1/2 for unambiguous supports")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def N(self) -> int:
        return int(self.values.size)

    @classmethod
    def from_signal(cls, signal: SpikeSignal, step: float, N: int) -> "UniformSamples":
        from .spikes import fourier_eval
        w = step * np.arange(1, N + 1)
        return cls(step, fourier_eval(signal, w), signal.lam)


@dataclass(frozen=True, eq=False)
class PronyResult:
    monic_poly: np.ndarray
    roots: np.ndarray
    supports: np.ndarray
    coeffs: np.ndarray
    residual: float
    lag: int = 1
    hankel_residual: float = 0.0
    polished: bool = False

    def to_signal(self, lam: float) -> SpikeSignal:
        return SpikeSignal.from_unsorted(lam, self.supports, self.coeffs)


# operator algebra on l2({1..n}); position 0 of an array holds index 1

def apply_modulation(z: complex, f) -> np.ndarray:
    """``(M_z f)(k) = z**k f(k)`` for ``k = 1..n``."""
    if abs(abs(z) - 1.0) > 1e-9:
        raise DomainError("modulation needs a unimodular z")
    f = np.asarray(f, dtype=complex)
    k = np.arange(1, f.size + 1)
    return np.exp(1j * np.angle(z) * k) * f


def apply_cyclic_shift(f) -> np.ndarray:
    """``(S f)(k) = f(k-1)`` with ``(S f)(1) = f(n)``."""
    return np.roll(np.asarray(f, dtype=complex), 1)


def apply_cyclic_shift_adjoint(f) -> np.ndarray:
    return np.roll(np.asarray(f, dtype=complex), -1)


def apply_annihilation_map(q, operator, f) -> np.ndarray:
    """Apply ``sum_l q_l (S^l)^* X S^l`` to ``f``; ``operator`` applies ``X``.

    ``q`` lists all coefficients ``q_0..q_deg`` (low order first).
    """
    f = np.asarray(f, dtype=complex)
    out = np.zeros_like(f)
    for l, ql in enumerate(np.asarray(q, dtype=complex)):
        g = np.roll(f, l)
        out += ql * np.roll(operator(g), -l)
    return out


def _hankel_system(values, s, lag):
    rows = values.size - s * lag
    idx = np.arange(rows)[:, None] + lag * np.arange(s + 1)[None, :]
    H = values[idx]
    return H[:, :s], -H[:, s]


def annihilating_polynomial(samples: UniformSamples, s: int, lag: int = 1):
    """Monic annihilating polynomial of the sample sequence.

    Solves ``sum_{l<s} q_l y[k + l*lag] = -y[k + s*lag]`` over every
    available row ``k`` in the least squares sense. With ``lag > 1`` the
    roots are ``z_j**lag``. Returns ``(q_0..q_{s-1}, relative residual)``.
    """
    if s < 1:
        raise DomainError("s must be at least 1")
    if lag < 1:
        raise DomainError("lag must be a positive integer")
    y = samples.values
    if y.size - s * lag < s:
        raise DomainError(
            f"need at least {s * lag + s} samples for order {s} at lag {lag}, got {y.size}")
    H, rhs = _hankel_system(y, s, lag)
    sv = np.linalg.svd(H, compute_uv=False)
    if sv[0] == 0 or sv[-1] <= RANK_TOL * sv[0]:
        rank = int(np.sum(sv > RANK_TOL * sv[0])) if sv[0] > 0 else 0
        raise RankDeficiencyError(
            f"Hankel block has numerical rank {rank} < {s}: fewer than {s} "
            "distinct spikes with nonzero coefficients")
    q, *_ = np.linalg.lstsq(H, rhs, rcond=None)
    rn = float(np.linalg.norm(rhs))
    residual = float(np.linalg.norm(H @ q - rhs)) / rn if rn > 0 else 0.0
    return q, residual


def hankel_rank(samples: UniformSamples, max_order: int | None = None,
                rtol: float = RANK_TOL) -> int:
    """Numerical rank of the square-ish Hankel matrix of the samples; an
    estimate of the number of spikes (diagnostic only)."""
    y = samples.values
    L = (y.size + 1) // 2 if max_order is None else min(max_order + 1, y.size)
    rows = y.size - L + 1
    if rows < 1:
        return 0
    H = y[np.arange(rows)[:, None] + np.arange(L)[None, :]]
    sv = np.linalg.svd(H, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))


def polynomial_roots(q) -> np.ndarray:
    """Roots of ``x**s + q_{s-1} x**(s-1) + ... + q_0``.

    Eigenvalues of the companion matrix, each followed by one guarded
    Newton step; ordered by ascending principal argument.
    """
    q = np.asarray(q, dtype=complex).ravel()
    s = q.size
    if s < 1:
        raise DomainError("degree must be at least 1")
    C = np.zeros((s, s), dtype=complex)
    C[1:, :-1] = np.eye(s - 1)
    C[:, -1] = -q
    try:
        z = np.linalg.eigvals(C)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"companion eigensolve failed: {exc}") from exc
    full = np.r_[q, 1.0]            # low order first
    dfull = full[1:] * np.arange(1, s + 1)
    for i, zi in enumerate(z):
        p = np.polynomial.polynomial.polyval(zi, full)
        dp = np.polynomial.polynomial.polyval(zi, dfull)
        if dp != 0:
            cand = zi - p / dp
            if abs(np.polynomial.polynomial.polyval(cand, full)) < abs(p):
                z[i] = cand
    return z[np.argsort(np.angle(z), kind="stable")]


def roots_to_supports(roots, step: float, lam: float, circle_tol: float = CIRCLE_TOL,
                      support_tol: float = SUPPORT_TOL) -> np.ndarray:
    """Invert ``z = exp(-2 pi i t step)`` on the principal branch.

    Supports within ``support_tol * max(1, lam)`` outside ``[0, lam]`` are
    clamped; anything further out is an inconsistency.
    """
    if not step * lam < 0.5:
        raise DomainError("step*lam must be < 1/2")
    z = np.asarray(roots, dtype=complex).ravel()
    off = np.abs(np.abs(z) - 1.0)
    if off.size and off.max() > circle_tol:
        raise OffCircleError(
            f"root modulus deviates from 1 by {off.max():.3e} (tolerance {circle_tol:.1e})")
    t = -np.angle(z) / (2 * np.pi * step)
    slack = support_tol * max(1.0, lam)
    if t.size and (t.min() < -slack or t.max() > lam + slack):
        raise InconsistencyError(
            f"recovered support outside [0, {lam}]: {t[(t < -slack) | (t > lam + slack)]}")
    return np.sort(np.clip(t, 0.0, lam))


def _vandermonde(supports, step, N):
    k = np.arange(1, N + 1)
    return np.exp(-2j * np.pi * step * np.multiply.outer(k, np.asarray(supports, dtype=float)))


def coefficients_from_supports(samples: UniformSamples, supports):
    """Least squares coefficients for known supports; returns ``(c, residual)``."""
    t = np.asarray(supports, dtype=float).ravel()
    y = samples.values
    if t.size == 0:
        return np.zeros(0, dtype=complex), 0.0
    if np.unique(t).size != t.size:
        raise RankDeficiencyError("supports must be distinct")
    if y.size < t.size:
        raise DomainError(f"need at least {t.size} samples, got {y.size}")
    V = _vandermonde(t, samples.step, y.size)
    c, _, rank, sv = np.linalg.lstsq(V, y, rcond=None)
    if sv[-1] <= RANK_TOL * sv[0]:
        raise RankDeficiencyError("Vandermonde system is numerically rank deficient")
    yn = float(np.linalg.norm(y))
    residual = float(np.linalg.norm(V @ c - y)) / yn if yn > 0 else 0.0
    return c, residual


def polish_spikes(samples: UniformSamples, supports, coeffs, max_nfev: int = 2000):
    """Gauss-Newton (Levenberg-Marquardt) refinement of supports and
    coefficients against all samples.

    Returns ``(supports, coeffs, residual)``; falls back to the input when
    the refinement does not lower the residual.
    """
    t0 = np.asarray(supports, dtype=float)
    c0 = np.asarray(coeffs, dtype=complex)
    s = t0.size
    y = samples.values
    if s == 0:
        yn = float(np.linalg.norm(y))
        return t0, c0, (0.0 if yn == 0 else 1.0)
    w = samples.step * np.arange(1, y.size + 1)
    yn = float(np.linalg.norm(y))

    def unpack(x):
        return x[:s], x[s:2 * s] + 1j * x[2 * s:]

    def resid(x):
        t, c = unpack(x)
        r = np.exp(-2j * np.pi * np.outer(w, t)) @ c - y
        return np.concatenate([r.real, r.imag])

    def jac(x):
        t, c = unpack(x)
        E = np.exp(-2j * np.pi * np.outer(w, t))
        J = np.hstack([E * (-2j * np.pi * w[:, None]) * c[None, :], E, 1j * E])
        return np.vstack([J.real, J.imag])

    x0 = np.concatenate([t0, c0.real, c0.imag])
    r0 = float(np.linalg.norm(resid(x0)))
    if r0 == 0:
        return t0, c0, 0.0
    sol = least_squares(resid, x0, jac=jac, method="lm", xtol=1e-15, ftol=1e-15,
                        gtol=1e-15, max_nfev=max_nfev)
    r1 = float(np.linalg.norm(sol.fun))
    if not np.all(np.isfinite(sol.x)) or r1 > r0:
        return t0, c0, r0 / yn
    t, c = unpack(sol.x)
    return t, c, r1 / yn


def default_lag(N: int, s: int, step: float, lam: float) -> int:
    """Largest lag leaving ``s`` spare Hankel rows beyond one per shift,
    capped so that ``lag * step * lam < 1/2``."""
    lag = max(1, (N - s) // (s + 1))
    cap = math.ceil(0.5 / (step * lam)) - 1
    return int(max(1, min(lag, cap)))


def prony(samples: UniformSamples, s: int, lag: int | None = None, polish: bool = True,
          circle_tol: float = CIRCLE_TOL) -> PronyResult:
    """Recover ``s`` spikes from equispaced Fourier samples.

    Annihilating polynomial at ``lag`` (default :func:`default_lag`), its
    roots, principal-branch supports, Vandermonde coefficients, then an
    optional Levenberg-Marquardt polish over all samples.
    """
    lam = samples.lam
    if s == 0:
        return PronyResult(np.zeros(0, dtype=complex), np.zeros(0, dtype=complex),
                           np.zeros(0), np.zeros(0, dtype=complex), 0.0)
    if lag is None:
        lag = default_lag(samples.N, s, samples.step, lam)
    q, hres = annihilating_polynomial(samples, s, lag)
    roots = polynomial_roots(q)
    step = samples.step
    if not polish:
        t = roots_to_supports(roots, step * lag, lam, circle_tol)
        if np.unique(t).size != t.size:
            raise RankDeficiencyError("recovered supports collide")
        c, res = coefficients_from_supports(samples, t)
        return PronyResult(q, roots, t, c, res, int(lag), hres, False)

    t = roots_to_supports(roots, step * lag, lam, SEED_TOL, SEED_TOL)
    if np.unique(t).size != t.size:
        raise RankDeficiencyError("recovered supports collide")
    c, res = coefficients_from_supports(samples, t)
    tp, cp, rp = polish_spikes(samples, t, c)
    polished = rp < res
    if polished:
        t, c, res = tp, cp, rp
    order = np.argsort(t, kind="stable")
    t, c = t[order], c[order]
    # the accepted model: nodes rebuilt from the final supports at the Hankel lag
    roots = np.exp(-2j * np.pi * step * lag * t)
    slack = SUPPORT_TOL * max(1.0, lam)
    if t.min() < -slack or t.max() > lam + slack:
        raise InconsistencyError(f"recovered support outside [0, {lam}]: {t}")
    if np.any(np.diff(t) <= 0):
        raise RankDeficiencyError("recovered supports collide")
    q = np.poly(roots)[::-1][:-1]
    return PronyResult(q, roots, np.clip(t, 0.0, lam), c, res, int(lag), hres, polished)
