"""JSON records for signals, graphs, embeddings and measurement data.

Complex numbers are stored as ``[re, im]`` pairs. Python's float repr is
the shortest round-tripping decimal, so every double survives a
save/load cycle bit for bit.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .exceptions import DomainError
from .expander import RegularGraph, spectral_gap
from .measurement import MagnitudeData, VertexEmbedding
from .pipeline import ExperimentConfig
from .spikes import SpikeSignal

__all__ = [
    "complex_to_pairs",
    "pairs_to_complex",
    "signal_to_record",
    "signal_from_record",
    "graph_to_record",
    "graph_from_record",
    "embedding_to_record",
    "embedding_from_record",
    "data_to_record",
    "data_from_record",
    "save_json",
    "load_json",
]


def complex_to_pairs(z) -> list:
    z = np.asarray(z, dtype=complex).ravel()
    return [[float(v.real), float(v.imag)] for v in z]


def pairs_to_complex(pairs) -> np.ndarray:
    a = np.asarray(pairs, dtype=float).reshape(-1, 2)
    return a[:, 0] + 1j * a[:, 1]


def _expect(rec, kind):
    if rec.get("type", kind) != kind:
        raise DomainError(f"expected a {kind!r} record, got {rec.get('type')!r}")


def signal_to_record(signal: SpikeSignal) -> dict:
    return {"type": "signal", "lambda": signal.lam,
            "supports": [float(t) for t in signal.supports],
            "coeffs": complex_to_pairs(signal.coeffs)}


def signal_from_record(rec: dict) -> SpikeSignal:
    _expect(rec, "signal")
    return SpikeSignal(float(rec["lambda"]), np.asarray(rec["supports"], dtype=float),
                       pairs_to_complex(rec["coeffs"]))


def graph_to_record(g: RegularGraph, certified_lambda1: float | None = None) -> dict:
    if certified_lambda1 is None and g.n > 1:
        certified_lambda1 = spectral_gap(g)
    return {"type": "graph", "n": g.n, "d": g.d, "edges": g.edges.tolist(),
            "certified_lambda1": certified_lambda1}


def graph_from_record(rec: dict) -> RegularGraph:
    _expect(rec, "graph")
    return RegularGraph(int(rec["n"]), int(rec["d"]),
                        np.asarray(rec["edges"], dtype=np.int64).reshape(-1, 2))


def embedding_to_record(e: VertexEmbedding) -> dict:
    return {"points": e.points.tolist(), "domain": e.domain_tag, "scale": e.scale,
            "modulus": e.modulus}


def embedding_from_record(rec: dict) -> VertexEmbedding:
    return VertexEmbedding(np.asarray(rec["points"], dtype=float), rec["domain"],
                           float(rec["scale"]), rec.get("modulus"))


def data_to_record(graph: RegularGraph, embedding: VertexEmbedding, data: MagnitudeData,
                   config: ExperimentConfig | None = None) -> dict:
    rec = {
        "type": "measurement",
        "graph": graph_to_record(graph),
        "embedding": embedding_to_record(embedding),
        "m0": data.m0.tolist(),
        "edges": data.edges.tolist(),
        "m1": data.m1.tolist(),
        "m2": data.m2.tolist(),
        "measurement_count": data.total_count,
    }
    if config is not None:
        rec["config"] = config.to_dict()
    return rec


def data_from_record(rec: dict):
    """Return ``(graph, embedding, data, config_or_None)``."""
    _expect(rec, "measurement")
    graph = graph_from_record(rec["graph"])
    embedding = embedding_from_record(rec["embedding"])
    data = MagnitudeData(np.asarray(rec["m0"], dtype=float), np.asarray(rec["m1"], dtype=float),
                         np.asarray(rec["m2"], dtype=float),
                         np.asarray(rec["edges"], dtype=np.int64).reshape(-1, 2))
    if not np.array_equal(data.edges, graph.edges):
        raise DomainError("measurement edge order does not match the graph")
    config = ExperimentConfig.from_dict(rec["config"]) if "config" in rec else None
    return graph, embedding, data, config


def save_json(obj, path) -> None:
    text = json.dumps(obj, indent=1, allow_nan=True)
    if str(path) == "-":
        print(text)
    else:
        Path(path).write_text(text + "\n")


def load_json(path):
    return json.loads(Path(path).read_text())
