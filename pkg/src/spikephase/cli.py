"""Command line entry point: ``spikephase <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys

from . import io
from .exceptions import SpikePhaseError
from .expander import ramanujan_graph, random_regular, spectral_gap
from .pipeline import ExperimentConfig, bench, end_to_end_recover, synthesize_measurement
from .spikes import class_distance, random_signal


def _cmd_gen(args) -> int:
    sig = random_signal(args.s, args.lam, args.sep, seed=args.seed)
    io.save_json(io.signal_to_record(sig), args.output)
    return 0


def _cmd_graph(args) -> int:
    if args.require_ramanujan:
        g = ramanujan_graph(args.n, args.d, seed=args.seed)
    else:
        g = random_regular(args.n, args.d, seed=args.seed)
    io.save_json(io.graph_to_record(g, spectral_gap(g)), args.output)
    return 0


def _load_config(args) -> ExperimentConfig:
    rec = io.load_json(args.config)
    for key, val in (("s", args.s), ("seed", args.seed)):
        if val is not None:
            rec[key] = val
    if "s" not in rec:
        raise SystemExit("config needs 's' (or pass --s)")
    if "seed" not in rec:
        raise SystemExit("config needs 'seed' (or pass --seed)")
    return ExperimentConfig.from_dict(rec)


def _cmd_measure(args) -> int:
    sig = io.signal_from_record(io.load_json(args.signal))
    if args.config is None:
        if args.seed is None:
            raise SystemExit("measure needs --config or --seed")
        config = ExperimentConfig(s=sig.s, lam=sig.lam, seed=args.seed)
    else:
        config = _load_config(args)
    if args.noise and args.noise_seed is None:
        raise SystemExit("--noise needs --noise-seed")
    graph, emb, data = synthesize_measurement(sig, config, noise=args.noise,
                                              noise_seed=args.noise_seed)
    io.save_json(io.data_to_record(graph, emb, data, config), args.output)
    return 0


def _dump(label, payload):
    print(json.dumps({label: payload}, indent=1), file=sys.stderr)


def _cmd_recover(args) -> int:
    graph, emb, data, config = io.data_from_record(io.load_json(args.data))
    if config is None:
        raise SystemExit("measurement record carries no config")
    if args.tau_rel is not None:
        config = ExperimentConfig(**{**config.__dict__, "tau_rel": args.tau_rel})
    signal, diag = end_to_end_recover(graph, emb, data, config)
    if args.dump_phases and diag.phases is not None:
        ph = diag.phases
        _dump("phases", {"anchor": ph.anchor, "component": ph.component.tolist(),
                         "values": io.complex_to_pairs(ph.values),
                         "component_sizes": list(ph.component_sizes)})
    if args.dump_resample and diag.resampling is not None:
        rs = diag.resampling
        _dump("resample", {"samples": io.complex_to_pairs(rs.samples), "residual": rs.residual,
                           "condition": rs.condition, "n_observations": rs.n_observations})
    if args.dump_prony and diag.prony is not None:
        pr = diag.prony
        _dump("prony", {"monic_poly": io.complex_to_pairs(pr.monic_poly),
                        "roots": io.complex_to_pairs(pr.roots), "lag": pr.lag,
                        "residual": pr.residual, "hankel_residual": pr.hankel_residual,
                        "polished": pr.polished})
    rec = io.signal_to_record(signal)
    rec["diagnostics"] = diag.summary()
    io.save_json(rec, args.output)
    return 0


def _cmd_verify(args) -> int:
    a = io.signal_from_record(io.load_json(args.a))
    b = io.signal_from_record(io.load_json(args.b))
    rep = class_distance(a, b, tol=args.tol)
    u = rep.aligned_phase
    print(json.dumps({"matched": rep.matched, "class_distance": rep.class_distance,
                      "aligned_phase": [u.real, u.imag],
                      "support_mismatch": rep.support_mismatch,
                      "coeff_mismatch": rep.coeff_mismatch}))
    return 0 if rep.matched else 1


def _cmd_bench(args) -> int:
    res = bench(args.trials, args.s, args.d, args.seed, lam=args.lam, omega=args.omega,
                tol=args.tol, n_jobs=args.jobs)
    rows = [
        ("s / d", f"{args.s} / {args.d}"),
        ("grid order n (n_min)", f"{res['n']} ({res['n_min']})"),
        ("graph vertices", res["graph_size"]),
        ("measurements (d+1)n", res["measurement_count"]),
        ("lambda1", f"{res['lambda1']:.6f}"),
        ("trials", res["trials"]),
        ("success rate", f"{res['success_rate']:.3f}"),
        ("rotation invariant rate", f"{res['rotation_invariant_rate']:.3f}"),
        ("max class distance", f"{res['max_class_distance']:.3e}"),
        ("max resample residual", f"{res['max_resample_residual']:.3e}"),
        ("max prony residual", f"{res['max_prony_residual']:.3e}"),
        ("min component size", res["min_component_size"]),
        ("wall time [s]", f"{res['wall_seconds']:.2f}"),
    ]
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  {v}")
    if args.output:
        summary = {k: v for k, v in res.items() if k != "results"}
        summary["trial_results"] = [r.__dict__ for r in res["results"]]
        io.save_json(summary, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spikephase",
                                description="Spike recovery from graph intensity measurements")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="random spike signal")
    g.add_argument("--s", type=int, required=True)
    g.add_argument("--lambda", dest="lam", type=float, default=1.0)
    g.add_argument("--sep", type=float, default=0.0, help="minimum support separation")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("-o", "--output", default="-")
    g.set_defaults(func=_cmd_gen)

    g = sub.add_parser("graph", help="random d-regular graph")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--require-ramanujan", action="store_true")
    g.add_argument("-o", "--output", default="-")
    g.set_defaults(func=_cmd_graph)

    g = sub.add_parser("measure", help="synthesize intensity data for a signal")
    g.add_argument("--signal", required=True)
    g.add_argument("--config", help="JSON config with s, lambda, omega, d, seed")
    g.add_argument("--s", type=int)
    g.add_argument("--seed", type=int, help="graph seed (overrides config)")
    g.add_argument("--noise", type=float, default=0.0)
    g.add_argument("--noise-seed", type=int)
    g.add_argument("-o", "--output", default="-")
    g.set_defaults(func=_cmd_measure)

    g = sub.add_parser("recover", help="recover a signal from intensity data")
    g.add_argument("--data", required=True)
    g.add_argument("--tau-rel", type=float)
    g.add_argument("--dump-phases", action="store_true")
    g.add_argument("--dump-resample", action="store_true")
    g.add_argument("--dump-prony", action="store_true")
    g.add_argument("-o", "--output", default="-")
    g.set_defaults(func=_cmd_recover)

    g = sub.add_parser("verify", help="compare two signals up to a global phase")
    g.add_argument("--a", required=True)
    g.add_argument("--b", required=True)
    g.add_argument("--tol", type=float, default=1e-6)
    g.set_defaults(func=_cmd_verify)

    g = sub.add_parser("bench", help="seeded end-to-end trials")
    g.add_argument("--trials", type=int, default=50)
    g.add_argument("--s", type=int, required=True)
    g.add_argument("--d", type=int, default=3)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--lambda", dest="lam", type=float, default=1.0)
    g.add_argument("--omega", type=float, default=0.25)
    g.add_argument("--tol", type=float, default=1e-6)
    g.add_argument("--jobs", type=int, default=1, help="worker processes")
    g.add_argument("-o", "--output")
    g.set_defaults(func=_cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpikePhaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
