"""Command-line front end: synth, solve, bench and tune subcommands.

Exit codes: 0 success (any solver stop reason), 2 configuration error,
3 numeric failure (Lipschitz estimation), 4 I/O error.
"""

import argparse
import json
import sys
from pathlib import Path

from .benchmark import (
    ExperimentConfig,
    resolve_cutoff,
    run_benchmark,
    select_cutoff,
    tune_hyperparams,
)
from .fidelity import HighPassFilter, LipschitzEstimationError
from .fileio import (
    benchmark_rows_to_csv,
    read_json,
    read_signal_csv,
    write_json,
    write_signal_csv,
)
from .penalties import SpoqParams
from .simulate import make_dataset
from .solver import SolverConfig, default_init_kernel, default_init_signal, solve

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


class ConfigError(Exception):
    pass


def _require(payload, key):
    if key not in payload:
        raise ConfigError(f"missing required key: {key!r}")
    return payload[key]


def _load_experiment_config(path, seed_override=None):
    try:
        payload = read_json(path)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    for key in ("dataset_style", "noise_percent", "realizations", "base_seed"):
        _require(payload, key)
    if seed_override is not None:
        payload["base_seed"] = int(seed_override)
    try:
        return ExperimentConfig.from_dict(payload)
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"bad experiment config: {exc}") from exc


def _spoq_from_payload(payload, args):
    fields = dict(payload.get("spoq", {}))
    if getattr(args, "p", None) is not None:
        fields["p"] = args.p
    if getattr(args, "q", None) is not None:
        fields["q"] = args.q
    try:
        return SpoqParams(**fields).validate()
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad penalty parameters: {exc}") from exc


def _solver_from_payload(payload):
    try:
        return SolverConfig(**payload.get("solver", {}))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad solver parameters: {exc}") from exc


def cmd_synth(args):
    cfg = _load_experiment_config(args.config, args.seed)
    truth = make_dataset(
        cfg.dataset_style,
        cfg.noise_percent,
        cfg.base_seed,
        n=cfg.n,
        kernel_size=cfg.kernel_size,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_signal_csv(out / "y.csv", truth.y)
    write_signal_csv(out / "s_true.csv", truth.s_true)
    write_signal_csv(out / "pi_true.csv", truth.pi_true)
    write_signal_csv(out / "t_true.csv", truth.t_true)
    write_json(
        out / "meta.json",
        {
            "seed": truth.seed,
            "sigma": truth.sigma,
            "n": int(truth.y.size),
            "kernel_size": int(truth.pi_true.size),
            "dataset_style": cfg.dataset_style,
            "noise_percent": cfg.noise_percent,
        },
    )
    print(f"wrote synthetic realization (seed {truth.seed}) to {out}")
    return EXIT_OK


def cmd_solve(args):
    observed = read_signal_csv(args.y)
    payload = read_json(args.params) if args.params else {}
    if "n" in payload and int(payload["n"]) != observed.size:
        raise ConfigError(
            f"configured n = {payload['n']} but {args.y} has {observed.size} samples"
        )
    params = _spoq_from_payload(payload, args)
    config = _solver_from_payload(payload)
    cutoff = args.fc if args.fc is not None else payload.get("cutoff")
    if cutoff is None:
        raise ConfigError("missing required key: 'cutoff' (or use --fc)")
    try:
        hp = HighPassFilter(observed.size, int(cutoff))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    kernel_size = int(payload.get("kernel_size", 21))
    decomp = solve(
        observed,
        default_init_signal(observed.size),
        default_init_kernel(kernel_size),
        hp,
        params,
        config,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_signal_csv(out / "s_hat.csv", decomp.s_hat)
    write_signal_csv(out / "pi_hat.csv", decomp.pi_hat)
    write_signal_csv(out / "t_hat.csv", decomp.t_hat)
    payload_out = decomp.to_dict()
    payload_out["config"] = {
        "spoq": {
            "p": params.p,
            "q": params.q,
            "alpha": params.alpha,
            "beta": params.beta,
            "eta": params.eta,
            "lam": params.lam,
        },
        "solver": {
            "gamma_s": config.gamma_s,
            "gamma_pi": config.gamma_pi,
            "theta": config.theta,
            "max_tr_tests": config.max_tr_tests,
            "epsilon": config.epsilon,
            "k_max": config.k_max,
        },
        "cutoff": int(cutoff),
        "kernel_size": kernel_size,
    }
    write_json(out / "decomposition.json", payload_out)
    print(
        f"solved in {decomp.iterations} iterations (stop: {decomp.stop_reason}); "
        f"outputs in {out}"
    )
    return EXIT_OK


def cmd_bench(args):
    cfg = _load_experiment_config(args.config, args.seed)
    result = run_benchmark(cfg, jobs=args.jobs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    benchmark_rows_to_csv(out / "benchmark.csv", result.rows)
    write_json(
        out / "summary.json",
        {**result.summary, "cutoff": result.cutoff, "config": cfg.to_dict()},
    )
    for name in ("snr_s", "tsnr_s", "snr_t", "snr_pi"):
        stats = result.summary[name]
        print(
            f"{name}: {stats['mean']:.6f} +/- {stats['std']:.6f} dB (n={stats['n']})"
        )
    if result.failures:
        print(f"failures: {len(result.failures)}")
    return EXIT_OK


def cmd_tune(args):
    try:
        payload = read_json(args.config)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {args.config}: {exc}") from exc
    for key in ("dataset_style", "noise_percent", "base_seed"):
        _require(payload, key)
    payload.setdefault("realizations", 1)
    if args.seed is not None:
        payload["base_seed"] = int(args.seed)
    cfg = ExperimentConfig.from_dict(payload)
    grid_spec = _require(payload, "grid")
    lams = grid_spec.get("lam", [cfg.spoq.lam])
    betas = grid_spec.get("beta", [cfg.spoq.beta])
    etas = grid_spec.get("eta", [cfg.spoq.eta])
    grid = [
        SpoqParams(
            p=cfg.spoq.p,
            q=cfg.spoq.q,
            alpha=cfg.spoq.alpha,
            beta=float(beta),
            eta=float(eta),
            lam=float(lam),
        )
        for lam in lams
        for beta in betas
        for eta in etas
    ]
    if not grid:
        raise ConfigError("tuning grid is empty")
    truth = make_dataset(
        cfg.dataset_style,
        cfg.noise_percent,
        cfg.base_seed,
        n=cfg.n,
        kernel_size=cfg.kernel_size,
    )
    cutoff = resolve_cutoff(cfg)
    tuned = tune_hyperparams(
        grid, truth, cfg.solver, cutoff, k_max_grid=payload.get("k_max_grid")
    )
    best_cutoff = select_cutoff(
        truth.y, cfg.cutoff_candidates, truth, tuned.spoq, cfg.solver
    )
    out = {
        "selected": {
            "p": tuned.spoq.p,
            "q": tuned.spoq.q,
            "alpha": tuned.spoq.alpha,
            "beta": tuned.spoq.beta,
            "eta": tuned.spoq.eta,
            "lam": tuned.spoq.lam,
            "k_max": tuned.k_max,
            "cutoff": best_cutoff,
        },
        "score": tuned.score,
        "scoreboard": [
            {
                "lam": entry["spoq"].lam,
                "beta": entry["spoq"].beta,
                "eta": entry["spoq"].eta,
                "k_max": entry["k_max"],
                "score": entry["score"],
                **({"error": entry["error"]} if "error" in entry else {}),
            }
            for entry in tuned.scoreboard
        ],
    }
    write_json(args.out, out)
    print(
        f"selected lam={tuned.spoq.lam} beta={tuned.spoq.beta} "
        f"eta={tuned.spoq.eta} cutoff={best_cutoff} (score {tuned.score:.6f})"
    )
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pendantss",
        description="Joint detrending and sparse blind deconvolution",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="generate one synthetic realization")
    synth.add_argument("--config", required=True)
    synth.add_argument("--out", required=True)
    synth.add_argument("--seed", type=int, default=None)
    synth.set_defaults(func=cmd_synth)

    solve_p = sub.add_parser("solve", help="decompose an observed signal")
    solve_p.add_argument("--y", required=True, help="observed signal CSV")
    solve_p.add_argument("--params", default=None, help="parameter JSON")
    solve_p.add_argument("--out", required=True)
    solve_p.add_argument("--p", type=float, default=None)
    solve_p.add_argument("--q", type=float, default=None)
    solve_p.add_argument("--fc", type=int, default=None)
    solve_p.set_defaults(func=cmd_solve)

    bench = sub.add_parser("bench", help="multi-realization benchmark")
    bench.add_argument("--config", required=True)
    bench.add_argument("--out", required=True)
    bench.add_argument("--jobs", type=int, default=1)
    bench.add_argument("--seed", type=int, default=None)
    bench.set_defaults(func=cmd_bench)

    tune = sub.add_parser("tune", help="grid-search hyperparameters")
    tune.add_argument("--config", required=True)
    tune.add_argument("--out", required=True)
    tune.add_argument("--seed", type=int, default=None)
    tune.set_defaults(func=cmd_tune)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LipschitzEstimationError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
