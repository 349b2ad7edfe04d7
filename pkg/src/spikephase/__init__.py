"""Recovery of spike trains from graph-structured intensity measurements
of their Fourier transform."""
from .estimator import IntensityMeasurement, SpikeRetriever
from .exceptions import (DomainError, GenerationError, InconsistencyError,
                         InsufficientComponentError, NumericalError, OffCircleError,
                         PipelineError, RankDeficiencyError, SizeError, SpikePhaseError)
from .expander import (RegularGraph, SpectralReport, cheeger_check, expansion_constant_exact,
                       is_ramanujan, normalized_laplacian_spectrum, ramanujan_graph,
                       random_regular, spectral_gap)
from .measurement import (MagnitudeData, VertexEmbedding, frequency_embedding, measure,
                          time_embedding)
from .pipeline import (ExperimentConfig, bench, end_to_end_recover, min_vertex_count,
                       synthesize_measurement, verify_recovery)
from .prony import PronyResult, UniformSamples, prony
from .propagate import PhaseAssignment, propagate_phases, relative_product
from .resample import invert_resampling, partial_dft_matrix
from .spikes import (RecoveryReport, SpikeSignal, class_distance, fourier_eval,
                     random_signal, zero_count_bound)

__version__ = "0.1.0"
