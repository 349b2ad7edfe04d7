"""End-to-end recovery: sizing, synthetic measurement, propagation,
resampling inverse, Prony, and comparison."""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (DomainError, InsufficientComponentError, PipelineError,
                         SpikePhaseError)
from .expander import RegularGraph, cached_ramanujan_graph, spectral_gap
from .measurement import MagnitudeData, VertexEmbedding, measure, time_embedding
from .prony import PronyResult, UniformSamples, prony
from .propagate import DEFAULT_TAU_REL, PhaseAssignment, propagate_phases
from .resample import ResamplingResult, forward_resampling, invert_resampling, is_prime
from .spikes import RecoveryReport, SpikeSignal, class_distance, fourier_eval, random_signal

__all__ = [
    "ExperimentConfig",
    "Diagnostics",
    "TrialResult",
    "min_vertex_count",
    "next_usable_prime",
    "frequency_samples",
    "synthesize_measurement",
    "end_to_end_recover",
    "verify_recovery",
    "trial_seed",
    "run_trial",
    "bench",
]


def min_vertex_count(s: int, lam: float, omega: float, d: int) -> int:
    """Smallest integer strictly above ``6 d (1 + 6/ln(s/(lam omega))) s / (d - 2 sqrt(d-1))``."""
    if d < 3:
        raise DomainError("need d >= 3")
    if s <= lam * omega:
        raise DomainError(f"need s > lam*omega (s={s}, lam*omega={lam * omega})")
    bound = 6.0 * d * (1.0 + 6.0 / math.log(s / (lam * omega))) * s / (d - 2.0 * math.sqrt(d - 1))
    return math.floor(bound) + 1


def next_usable_prime(n_min: int) -> int:
    if n_min < 2:
        raise DomainError("n_min must be at least 2")
    n = int(n_min)
    while not is_prime(n):
        n += 1
    return n


@dataclass(frozen=True)
class ExperimentConfig:
    """Sizes for one recovery experiment.

    The time grid has prime order ``n`` with ``m = (n-1)/2`` frequency
    samples at ``k * omega / m``. The measurement graph lives on
    ``graph_size`` grid points: ``n`` of them, or ``n + 1`` (closing the grid
    at ``2 lam``) when ``n * d`` is odd and no ``d``-regular graph on ``n``
    vertices exists.
    """

    s: int
    lam: float = 1.0
    omega: float = 0.25
    d: int = 3
    seed: int = 0
    tau_rel: float = DEFAULT_TAU_REL
    n_override: int | None = None
    polish: bool = True

    def __post_init__(self):
        if self.s < 0:
            raise DomainError("s must be nonnegative")
        if not (self.lam > 0 and self.omega > 0):
            raise DomainError("lam and omega must be positive")
        if not self.omega * self.lam < 0.5:
            raise DomainError("need omega * lam < 1/2")
        if self.d < 3:
            raise DomainError("need d >= 3")
        if self.n_override is not None:
            if not is_prime(self.n_override) or self.n_override < 3:
                raise DomainError(f"n_override={self.n_override} must be an odd prime")
            if self.graph_size <= self.d:
                raise DomainError("grid too small for a d-regular graph")

    @property
    def n_min(self) -> int | None:
        if self.s <= self.lam * self.omega:
            return None
        return min_vertex_count(self.s, self.lam, self.omega, self.d)

    @property
    def n(self) -> int:
        if self.n_override is not None:
            return int(self.n_override)
        n_min = self.n_min
        if n_min is None:
            raise DomainError("sizing bound undefined for s <= lam*omega; set n_override")
        return next_usable_prime(max(n_min, 3))

    @property
    def overridden(self) -> bool:
        return self.n_override is not None and (self.n_min is None or self.n < self.n_min)

    @property
    def m(self) -> int:
        return (self.n - 1) // 2

    @property
    def graph_size(self) -> int:
        n = self.n
        return n if n * self.d % 2 == 0 else n + 1

    @property
    def measurement_count(self) -> int:
        return (self.d + 1) * self.graph_size

    def to_dict(self) -> dict:
        return {"s": self.s, "lambda": self.lam, "omega": self.omega, "d": self.d,
                "seed": self.seed, "tau_rel": self.tau_rel, "n_override": self.n_override,
                "polish": self.polish}

    @classmethod
    def from_dict(cls, rec: dict) -> "ExperimentConfig":
        return cls(s=int(rec["s"]), lam=float(rec.get("lambda", 1.0)),
                   omega=float(rec.get("omega", 0.25)), d=int(rec.get("d", 3)),
                   seed=int(rec.get("seed", 0)),
                   tau_rel=float(rec.get("tau_rel", DEFAULT_TAU_REL)),
                   n_override=rec.get("n_override"), polish=bool(rec.get("polish", True)))


@dataclass
class Diagnostics:
    n: int
    m: int
    graph_size: int
    n_min: int | None
    measurement_count: int
    component_size: int = 0
    component_sizes: list = field(default_factory=list)
    distinct_grid_indices: int = 0
    resample_residual: float = 0.0
    resample_condition: float = 1.0
    prony_residual: float = 0.0
    hankel_residual: float = 0.0
    prony_lag: int = 0
    phases: PhaseAssignment | None = None
    resampling: ResamplingResult | None = None
    prony: PronyResult | None = None

    @property
    def component_fraction(self) -> float:
        return self.component_size / self.graph_size if self.graph_size else 0.0

    def summary(self) -> dict:
        return {
            "n": self.n, "m": self.m, "graph_size": self.graph_size, "n_min": self.n_min,
            "measurement_count": self.measurement_count,
            "component_size": self.component_size,
            "component_sizes": self.component_sizes[:5],
            "distinct_grid_indices": self.distinct_grid_indices,
            "resample_residual": self.resample_residual,
            "resample_condition": self.resample_condition,
            "prony_residual": self.prony_residual,
            "hankel_residual": self.hankel_residual,
            "prony_lag": self.prony_lag,
        }


def frequency_samples(signal: SpikeSignal, config: ExperimentConfig) -> np.ndarray:
    """Fourier samples ``mu_hat(k omega / m)`` for ``k = 1..m``."""
    m = config.m
    return fourier_eval(signal, np.arange(1, m + 1) * (config.omega / m))


def synthesize_measurement(signal: SpikeSignal, config: ExperimentConfig, noise: float = 0.0,
                           noise_seed=None):
    """Oversampled intensity measurement of ``signal`` on a certified graph.

    Returns ``(graph, embedding, data)``; the graph depends only on the
    sizes and ``config.seed``.
    """
    if signal.lam != config.lam:
        raise DomainError("signal window differs from the configured lam")
    graph = cached_ramanujan_graph(config.graph_size, config.d, config.seed)
    embedding = time_embedding(config.graph_size, config.lam, modulus=config.n)
    values = forward_resampling(frequency_samples(signal, config), config.n,
                                embedding.grid_indices())
    return graph, embedding, measure(values, graph, noise=noise, seed=noise_seed)


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except SpikePhaseError as exc:
        raise PipelineError(name, exc) from exc


def end_to_end_recover(graph: RegularGraph, embedding: VertexEmbedding, data: MagnitudeData,
                       config: ExperimentConfig):
    """Recover a representative of the measured signal's class.

    Returns ``(signal, diagnostics)``. Stage failures surface as
    :class:`PipelineError` carrying the stage name.
    """
    n, m = config.n, config.m
    diag = Diagnostics(n=n, m=m, graph_size=graph.n, n_min=config.n_min,
                       measurement_count=data.total_count)
    if embedding.modulus != n or embedding.n != graph.n:
        raise PipelineError("setup", DomainError("embedding does not match the configuration"))

    phases = _stage("propagate", propagate_phases, graph, data, tau_rel=config.tau_rel)
    diag.phases = phases
    diag.component_size = phases.size
    diag.component_sizes = list(phases.component_sizes)
    if phases.is_empty:
        return SpikeSignal.zero(config.lam), diag

    grid = embedding.grid_indices()[phases.component]
    diag.distinct_grid_indices = int(np.unique(grid).size)
    if diag.distinct_grid_indices < m:
        raise PipelineError("resample", InsufficientComponentError(
            f"component covers {diag.distinct_grid_indices} grid points, need m={m}"))
    rs = _stage("resample", invert_resampling, phases.values, grid, n, m)
    diag.resampling = rs
    diag.resample_residual = rs.residual
    diag.resample_condition = rs.condition

    samples = _stage("prony", UniformSamples, config.omega / m, rs.samples, config.lam)
    pr = _stage("prony", prony, samples, config.s, polish=config.polish)
    diag.prony = pr
    diag.prony_residual = pr.residual
    diag.hankel_residual = pr.hankel_residual
    diag.prony_lag = pr.lag
    return _stage("prony", pr.to_signal, config.lam), diag


def verify_recovery(original: SpikeSignal, recovered: SpikeSignal, tol: float = 1e-6) -> RecoveryReport:
    return class_distance(original, recovered, tol=tol)


def trial_seed(master_seed: int, index: int) -> int:
    """Deterministic per-trial seed derived from ``(master_seed, index)``."""
    return int(np.random.SeedSequence([int(master_seed), int(index)]).generate_state(1)[0])


@dataclass
class TrialResult:
    index: int
    seed: int
    matched: bool
    class_distance: float
    rotation_invariant: bool
    rotation_gap: float
    component_size: int
    graph_size: int
    measurement_count: int
    resample_residual: float
    prony_residual: float
    seconds: float
    error: str | None = None


def run_trial(config: ExperimentConfig, index: int, tol: float = 1e-6,
              min_separation: float | None = None) -> TrialResult:
    """One seeded synthesize/recover/verify round, including the rotated input."""
    seed = trial_seed(config.seed, index)
    rng = np.random.default_rng(seed)
    sep = config.lam / (config.s + 1) if min_separation is None else min_separation
    signal = random_signal(config.s, config.lam, sep, seed=rng)
    u = complex(np.exp(2j * np.pi * rng.uniform()))
    start = time.perf_counter()
    try:
        graph, emb, data = synthesize_measurement(signal, config)
        rec, diag = end_to_end_recover(graph, emb, data, config)
        _, _, data_u = synthesize_measurement(signal.scaled(u), config)
        rec_u, _ = end_to_end_recover(graph, emb, data_u, config)
    except PipelineError as exc:
        return TrialResult(index, seed, False, math.inf, False, math.inf, 0,
                           config.graph_size, config.measurement_count, math.nan, math.nan,
                           time.perf_counter() - start, str(exc))
    elapsed = time.perf_counter() - start
    report = verify_recovery(signal, rec, tol)
    gap = representative_gap(rec, rec_u)
    return TrialResult(index, seed, report.matched, report.class_distance, gap <= tol, gap,
                       diag.component_size, graph.n, data.total_count,
                       diag.resample_residual, diag.prony_residual, elapsed)


def representative_gap(a: SpikeSignal, b: SpikeSignal) -> float:
    """Distance between two representatives without any phase alignment."""
    if a.s != b.s:
        return math.inf
    if a.s == 0:
        return 0.0
    return float(np.max(np.abs(a.supports - b.supports))
                 + np.linalg.norm(a.coeffs - b.coeffs))


def bench(trials: int, s: int, d: int, seed: int, lam: float = 1.0, omega: float = 0.25,
          tol: float = 1e-6, n_jobs: int = 1, **config_kwargs) -> dict:
    """Run seeded trials and summarize success rate, residuals and sizes.

    Trial ``i`` is seeded from ``(seed, i)`` alone, so ``n_jobs > 1`` (a
    process pool) returns the same results as a sequential run.
    """
    config = ExperimentConfig(s=s, lam=lam, omega=omega, d=d, seed=seed, **config_kwargs)
    start = time.perf_counter()
    graph = cached_ramanujan_graph(config.graph_size, config.d, config.seed)
    if n_jobs > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(partial(run_trial, config, tol=tol), range(trials)))
    else:
        results = [run_trial(config, i, tol) for i in range(trials)]
    total = time.perf_counter() - start
    ok = [r for r in results if r.matched]
    finite = [r for r in results if r.error is None]
    return {
        "config": config.to_dict(),
        "n": config.n, "m": config.m, "n_min": config.n_min,
        "graph_size": config.graph_size, "measurement_count": config.measurement_count,
        "lambda1": spectral_gap(graph),
        "trials": trials,
        "success_rate": len(ok) / trials if trials else math.nan,
        "rotation_invariant_rate": (sum(r.rotation_invariant for r in results) / trials
                                    if trials else math.nan),
        "max_class_distance": max((r.class_distance for r in results), default=math.nan),
        "max_resample_residual": max((r.resample_residual for r in finite), default=math.nan),
        "max_prony_residual": max((r.prony_residual for r in finite), default=math.nan),
        "min_component_size": min((r.component_size for r in results), default=0),
        "wall_seconds": total,
        "results": results,
    }

