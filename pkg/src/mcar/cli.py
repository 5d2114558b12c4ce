"""Command-line front end.

Subcommands: ``solve`` (one dataset, one method), ``sweep`` (one parameter
grid), ``synth`` (emit a synthetic dataset to files), ``eval`` (score a
predictions file against truth).  Exit codes: 0 success, 1 usage or parse
error, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import DataError, SolverDivergenceError
from .experiments import (
    METHODS,
    SWEEP_PARAMS,
    DataFiles,
    ExperimentConfig,
    emit_report,
    run_experiment,
    run_sweep,
)
from .ice import IceConfig
from .io import (
    ensure_dir,
    load_truth,
    write_candidates,
    write_features,
    write_truth,
)
from .labels import labeling_error_rate
from .solver import SolverConfig
from .synth import AmbiguityParams, ConvexHullSpec, synthesize_dataset

USAGE_EXIT = 1
NUMERIC_EXIT = 2


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _add_solver_flags(parser):
    parser.add_argument(
        "--lambda", dest="lam", type=float, default=None,
        help="sparse feature-noise tradeoff (default: 1/sqrt(max(c+m, N)))",
    )
    parser.add_argument(
        "--gamma", type=float, default=None,
        help="label-sparsity tradeoff (default: twice the lambda default)",
    )
    parser.add_argument("--tol", type=float, default=1e-7,
                        help="relative residual convergence threshold")
    parser.add_argument("--max-iter", type=int, default=500,
                        help="inner iteration cap")
    parser.add_argument("--fe", type=float, default=0.5,
                        help="candidate elimination factor")
    parser.add_argument("--max-outer", type=int, default=5,
                        help="outer elimination iteration cap")


def _add_data_flags(parser, required=True):
    parser.add_argument("--features", required=required,
                        help="CSV, one row per instance")
    parser.add_argument("--candidates", required=required,
                        help="text file, line j = candidate classes of instance j (1-based)")
    parser.add_argument("--truth", default=None,
                        help="optional ground-truth labels, one per line (1-based)")
    parser.add_argument("--groups", default=None,
                        help="optional co-occurrence groups, line k = instance indices (1-based)")
    parser.add_argument("--classes", type=int, default=None,
                        help="number of classes (default: inferred from the files)")
    parser.add_argument("--normalize", action="store_true",
                        help="scale features into [0,1] by the global min/max")


def _add_synth_flags(parser):
    parser.add_argument("--classes", type=int, default=3, help="number of classes")
    parser.add_argument("--vertices", type=int, default=2,
                        help="hull vertices per class")
    parser.add_argument("--per-class", type=int, default=10,
                        help="samples per class")
    parser.add_argument("--dim", type=int, default=20, help="feature dimension")
    parser.add_argument("--separation", type=float, default=4.0,
                        help="minimum distance between class centroids")
    parser.add_argument("--noise", type=float, default=0.0,
                        help="dense Gaussian noise std")
    parser.add_argument("--sparse-fraction", type=float, default=0.0,
                        help="fraction of feature entries receiving sparse corruption")
    parser.add_argument("--sparse-magnitude", type=float, default=1.0,
                        help="magnitude of sparse corruption entries")
    parser.add_argument("--fraction", type=float, default=0.9,
                        help="portion of instances receiving extra labels")
    parser.add_argument("--extra", type=int, default=1,
                        help="extra labels per ambiguous instance")
    parser.add_argument("--epsilon", type=float, default=0.5,
                        help="distractor co-occurrence degree")


def _seeds(args) -> tuple[int, ...]:
    if getattr(args, "seeds", None):
        try:
            return tuple(int(s) for s in args.seeds.split(","))
        except ValueError:
            raise DataError(f"cannot parse seed list {args.seeds!r}") from None
    return (args.seed,)


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        lam=args.lam, gamma=args.gamma, tol=args.tol, max_iter=args.max_iter
    )


def _experiment_config(args) -> ExperimentConfig:
    solver = _solver_config(args)
    ice = IceConfig(
        elimination_factor=args.fe, max_outer=args.max_outer, solver=solver
    )
    if getattr(args, "features", None):
        files = DataFiles(
            features=args.features,
            candidates=args.candidates,
            groups=args.groups,
            truth=args.truth,
            num_classes=args.classes,
        )
        return ExperimentConfig(
            method=args.method,
            files=files,
            solver=solver,
            ice=ice,
            seeds=_seeds(args),
            normalize=args.normalize,
        )
    spec = ConvexHullSpec(
        num_classes=args.classes,
        vertices_per_class=args.vertices,
        ambient_dim=args.dim,
        samples_per_class=args.per_class,
        vertex_separation=args.separation,
        noise_level=args.noise,
        sparse_fraction=args.sparse_fraction,
        sparse_magnitude=args.sparse_magnitude,
    )
    ambiguity = AmbiguityParams(
        fraction=args.fraction, extra_count=args.extra, epsilon=args.epsilon
    )
    return ExperimentConfig(
        method=args.method,
        synth=spec,
        ambiguity=ambiguity,
        solver=solver,
        ice=ice,
        seeds=_seeds(args),
    )


def _print_report(report):
    for o in report.outcomes:
        if o.failure:
            print(f"seed {o.seed}: FAILED ({o.failure})")
        elif o.error_rate is not None:
            print(
                f"seed {o.seed}: error {o.error_rate:.4f}, "
                f"{o.iterations} iterations, converged={o.converged}"
            )
        else:
            print(f"seed {o.seed}: {o.iterations} iterations, converged={o.converged}")
    if report.mean_error is not None:
        print(
            f"{report.method}: mean error {report.mean_error:.4f} "
            f"(std {report.std_error:.4f}) over {len(report.outcomes)} seed(s)"
        )


def _cmd_solve(args) -> int:
    config = _experiment_config(args)
    report = run_experiment(config)
    _print_report(report)
    if args.out:
        written = emit_report(report, args.out, config=config)
        for name, path in sorted(written.items()):
            print(f"wrote {name}: {path}")
    if all(o.failure for o in report.outcomes):
        return NUMERIC_EXIT
    return 0


def _cmd_sweep(args) -> int:
    config = _experiment_config(args)
    try:
        values = [float(v) for v in args.values.split(",")]
    except ValueError:
        raise DataError(f"cannot parse sweep values {args.values!r}") from None
    points = run_sweep(config, args.param, values)
    for value, report in points:
        mean = "n/a" if report.mean_error is None else f"{report.mean_error:.4f}"
        std = "n/a" if report.std_error is None else f"{report.std_error:.4f}"
        print(f"{args.param}={value}: mean error {mean} (std {std})")
    if args.out:
        written = emit_report(
            points[-1][1], args.out, config=config, sweep=points,
            sweep_param=args.param,
        )
        for name, path in sorted(written.items()):
            print(f"wrote {name}: {path}")
    if all(o.failure for _, rep in points for o in rep.outcomes):
        return NUMERIC_EXIT
    return 0


def _cmd_synth(args) -> int:
    spec = ConvexHullSpec(
        num_classes=args.classes,
        vertices_per_class=args.vertices,
        ambient_dim=args.dim,
        samples_per_class=args.per_class,
        vertex_separation=args.separation,
        noise_level=args.noise,
        sparse_fraction=args.sparse_fraction,
        sparse_magnitude=args.sparse_magnitude,
        seed=args.seed,
    )
    params = AmbiguityParams(
        fraction=args.fraction,
        extra_count=args.extra,
        epsilon=args.epsilon,
        seed=args.seed,
    )
    dataset, _ = synthesize_dataset(spec, params)
    out = ensure_dir(args.out)
    write_features(out / "features.csv", dataset.features)
    write_candidates(out / "candidates.txt", dataset.candidates)
    write_truth(out / "truth.txt", dataset.ground_truth)
    print(
        f"wrote {dataset.num_instances} instances "
        f"({dataset.feature_dim} features, {dataset.num_classes} classes) to {out}"
    )
    return 0


def _cmd_eval(args) -> int:
    pred = load_truth(args.pred)
    truth = load_truth(args.truth)
    error = labeling_error_rate(pred, truth)
    print(f"labeling error rate: {error:.4f} ({pred.size} instances)")
    if args.out:
        out = ensure_dir(args.out)
        (out / "eval.json").write_text(
            json.dumps(
                {"error_rate": error, "instances": int(pred.size)}, sort_keys=True
            )
            + "\n"
        )
        print(f"wrote eval: {out / 'eval.json'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="mcar",
        description="Disambiguate candidate-labeled data by low-rank matrix completion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run one method on one dataset")
    _add_data_flags(solve)
    solve.add_argument("--method", choices=METHODS, default="wmcar")
    _add_solver_flags(solve)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--seeds", default=None, help="comma-separated seed list")
    solve.add_argument("--out", default=None, help="output directory")
    solve.set_defaults(func=_cmd_solve)

    sweep = sub.add_parser(
        "sweep", help="run one method over a parameter grid (synthetic data)"
    )
    _add_synth_flags(sweep)
    sweep.add_argument("--method", choices=METHODS, default="wmcar")
    sweep.add_argument("--param", choices=SWEEP_PARAMS, required=True)
    sweep.add_argument("--values", required=True, help="comma-separated values")
    _add_solver_flags(sweep)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--seeds", default=None, help="comma-separated seed list")
    sweep.add_argument("--out", default=None, help="output directory")
    sweep.set_defaults(func=_cmd_sweep)

    synth = sub.add_parser("synth", help="emit a synthetic dataset to files")
    _add_synth_flags(synth)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out", required=True, help="output directory")
    synth.set_defaults(func=_cmd_synth)

    ev = sub.add_parser("eval", help="score a predictions file against truth")
    ev.add_argument("--pred", required=True, help="predictions CSV or label list")
    ev.add_argument("--truth", required=True, help="truth labels, one per line")
    ev.add_argument("--out", default=None, help="output directory")
    ev.set_defaults(func=_cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"mcar: error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (SolverDivergenceError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"mcar: numeric failure: {exc}", file=sys.stderr)
        return NUMERIC_EXIT


if __name__ == "__main__":
    sys.exit(main())
