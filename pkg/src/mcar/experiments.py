"""Experiment orchestration: seeded runs, parameter sweeps, and reports.

A run takes one data source (a synthetic generation recipe or a set of file
paths), one method, and a list of seeds; it resolves the ambiguity per seed,
scores the recovered labels against the ground truth when available, and
aggregates mean/std error.  Reports serialize to JSON with timing isolated
in its own block so that repeated runs are byte-identical otherwise.
"""

from __future__ import annotations

import dataclasses
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError
from .groups import (
    GroupStructure,
    extended_candidates,
    group_mcar_solve,
    group_wmcar_solve,
)
from .ice import IceConfig, mcar_ice, wmcar_ice
from .io import ensure_dir, load_dataset, write_predictions
from .labels import (
    AmbiguousDataset,
    identity_weights,
    imbalance_factor,
    init_soft_labels,
    labeling_error_rate,
    predict_labels,
)
from .solver import SolverConfig, mcar_solve, wmcar_solve
from .synth import AmbiguityParams, ConvexHullSpec, synthesize_dataset

METHODS = ("mcar", "wmcar", "mcar-ice", "wmcar-ice", "group-mcar", "group-wmcar")


@dataclass(frozen=True)
class DataFiles:
    """File-based data source (see :func:`mcar.io.load_dataset`)."""

    features: str
    candidates: str
    groups: str | None = None
    truth: str | None = None
    num_classes: int | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    method: str = "wmcar"
    synth: ConvexHullSpec | None = None
    ambiguity: AmbiguityParams | None = None
    files: DataFiles | None = None
    solver: SolverConfig = field(default_factory=SolverConfig)
    ice: IceConfig | None = None
    seeds: tuple[int, ...] = (0,)
    normalize: bool = False
    identity_weights: bool = False  # force unit weights in weighted methods

    def __post_init__(self):
        if self.method not in METHODS:
            raise DataError(f"unknown method {self.method!r}; choose from {METHODS}")
        if (self.synth is None) == (self.files is None):
            raise DataError("exactly one of synth or files must be given")
        if self.synth is not None and self.ambiguity is None:
            raise DataError("synthetic data needs ambiguity parameters")
        if self.method.startswith("group") and (
            self.files is None or self.files.groups is None
        ):
            raise DataError("group methods need a groups file")
        if not self.seeds:
            raise DataError("at least one seed is required")
        if self.ice is None:
            object.__setattr__(self, "ice", IceConfig(solver=self.solver))


@dataclass(frozen=True)
class SeedOutcome:
    seed: int
    error_rate: float | None
    imbalance: float
    iterations: int
    outer_iterations: int
    converged: bool
    failure: str | None
    predictions: np.ndarray | None = dataclasses.field(repr=False, default=None)
    soft_labels: np.ndarray | None = dataclasses.field(repr=False, default=None)
    seconds: float = 0.0


@dataclass(frozen=True)
class ExperimentReport:
    method: str
    outcomes: tuple[SeedOutcome, ...]
    mean_error: float | None
    std_error: float | None
    mean_imbalance: float
    total_seconds: float

    @property
    def errors(self) -> list[float]:
        return [o.error_rate for o in self.outcomes if o.error_rate is not None]


def _materialize(
    config: ExperimentConfig, seed: int
) -> tuple[AmbiguousDataset, GroupStructure | None]:
    if config.synth is not None:
        spec = dataclasses.replace(config.synth, seed=seed)
        params = dataclasses.replace(config.ambiguity, seed=seed)
        dataset, _ = synthesize_dataset(spec, params)
        return dataset, None
    f = config.files
    return load_dataset(
        f.features,
        f.candidates,
        groups_path=f.groups,
        truth_path=f.truth,
        num_classes=f.num_classes,
        normalize=config.normalize,
    )


def _run_method(config: ExperimentConfig, dataset, structure):
    """Returns (soft labels, prediction candidate sets, iterations, outer, converged)."""
    method = config.method
    P = init_soft_labels(dataset.candidates, dataset.num_classes)
    W = (
        identity_weights(dataset.num_instances)
        if config.identity_weights
        else None
    )
    if method == "mcar":
        result = mcar_solve(dataset, P=P, config=config.solver)
        return result.Y, dataset.candidates, result.iterations, 0, result.converged
    if method == "wmcar":
        result = wmcar_solve(dataset, P=P, W=W, config=config.solver)
        return result.Y, dataset.candidates, result.iterations, 0, result.converged
    if method in ("mcar-ice", "wmcar-ice"):
        ice_config = config.ice
        runner = mcar_ice if method == "mcar-ice" or config.identity_weights else wmcar_ice
        result, trace = runner(dataset, ice_config)
        iters = sum(r.solver_iterations for r in trace.records)
        converged = all(r.solver_converged for r in trace.records)
        return result.Y, trace.final_candidates, iters, len(trace.records), converged
    if method == "group-mcar" or (method == "group-wmcar" and config.identity_weights):
        result = group_mcar_solve(dataset, structure, P=P, config=config.solver)
    else:
        result = group_wmcar_solve(dataset, structure, P=P, config=config.solver)
    ext = extended_candidates(dataset.candidates, dataset.num_classes)
    return result.Y, ext, result.iterations, 0, result.converged


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Execute one method over all seeds and aggregate the error rates.

    Solver failures are recorded per seed rather than aborting the run.
    """
    outcomes = []
    start_all = time.perf_counter()
    for seed in config.seeds:
        start = time.perf_counter()
        dataset, structure = _materialize(config, seed)
        imbalance = imbalance_factor(dataset.candidates, dataset.num_classes)
        try:
            Y, cands, iters, outer, converged = _run_method(config, dataset, structure)
        except Exception as exc:  # recorded, not raised: keep the sweep going
            outcomes.append(
                SeedOutcome(
                    seed=seed,
                    error_rate=None,
                    imbalance=imbalance,
                    iterations=0,
                    outer_iterations=0,
                    converged=False,
                    failure=f"{type(exc).__name__}: {exc}",
                    seconds=time.perf_counter() - start,
                )
            )
            continue
        pred = predict_labels(Y, cands)
        error = None
        if dataset.ground_truth is not None:
            error = labeling_error_rate(pred, dataset.ground_truth)
        outcomes.append(
            SeedOutcome(
                seed=seed,
                error_rate=error,
                imbalance=imbalance,
                iterations=iters,
                outer_iterations=outer,
                converged=converged,
                failure=None,
                predictions=pred,
                soft_labels=Y,
                seconds=time.perf_counter() - start,
            )
        )
    errors = [o.error_rate for o in outcomes if o.error_rate is not None]
    return ExperimentReport(
        method=config.method,
        outcomes=tuple(outcomes),
        mean_error=float(np.mean(errors)) if errors else None,
        std_error=float(np.std(errors)) if errors else None,
        mean_imbalance=float(np.mean([o.imbalance for o in outcomes])),
        total_seconds=time.perf_counter() - start_all,
    )


SWEEP_PARAMS = ("fraction", "extra_count", "epsilon", "lam", "gamma", "fe", "noise_level")


def sweep_config(config: ExperimentConfig, param: str, value) -> ExperimentConfig:
    """Derive a config with one swept parameter changed."""
    if param in ("fraction", "epsilon"):
        if config.ambiguity is None:
            raise DataError(f"sweeping {param} requires synthetic data")
        return dataclasses.replace(
            config, ambiguity=dataclasses.replace(config.ambiguity, **{param: float(value)})
        )
    if param == "extra_count":
        if config.ambiguity is None:
            raise DataError("sweeping extra_count requires synthetic data")
        return dataclasses.replace(
            config,
            ambiguity=dataclasses.replace(config.ambiguity, extra_count=int(value)),
        )
    if param == "noise_level":
        if config.synth is None:
            raise DataError("sweeping noise_level requires synthetic data")
        return dataclasses.replace(
            config, synth=dataclasses.replace(config.synth, noise_level=float(value))
        )
    if param in ("lam", "gamma"):
        solver = dataclasses.replace(config.solver, **{param: float(value)})
        return dataclasses.replace(
            config,
            solver=solver,
            ice=dataclasses.replace(config.ice, solver=solver),
        )
    if param == "fe":
        return dataclasses.replace(
            config,
            ice=dataclasses.replace(config.ice, elimination_factor=float(value)),
        )
    raise DataError(f"unknown sweep parameter {param!r}; choose from {SWEEP_PARAMS}")


def run_sweep(
    config: ExperimentConfig, param: str, values
) -> list[tuple[float, ExperimentReport]]:
    return [(v, run_experiment(sweep_config(config, param, v))) for v in values]


def _config_dict(config: ExperimentConfig) -> dict:
    def convert(obj):
        if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
            return {k: convert(v) for k, v in dataclasses.asdict(obj).items()}
        if isinstance(obj, (list, tuple)):
            return [convert(v) for v in obj]
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        return obj
    return convert(config)


def report_payload(
    report: ExperimentReport, config: ExperimentConfig | None = None
) -> dict:
    """JSON-ready view of a report, timing isolated under ``timing``."""
    payload = {
        "method": report.method,
        "aggregate": {
            "mean_error": report.mean_error,
            "std_error": report.std_error,
            "mean_imbalance": report.mean_imbalance,
            "seeds": len(report.outcomes),
            "failures": sum(1 for o in report.outcomes if o.failure),
        },
        "per_seed": [
            {
                "seed": o.seed,
                "error_rate": o.error_rate,
                "imbalance": o.imbalance,
                "iterations": o.iterations,
                "outer_iterations": o.outer_iterations,
                "converged": o.converged,
                "failure": o.failure,
            }
            for o in report.outcomes
        ],
        "timing": {
            "total_seconds": report.total_seconds,
            "per_seed_seconds": [o.seconds for o in report.outcomes],
        },
    }
    if config is not None:
        payload["config"] = _config_dict(config)
    return payload


def emit_report(
    report: ExperimentReport,
    out_dir,
    config: ExperimentConfig | None = None,
    sweep: list[tuple[float, ExperimentReport]] | None = None,
    sweep_param: str | None = None,
) -> dict[str, Path]:
    """Write report.json, predictions.csv, and (for sweeps) curve.csv.

    Returns the paths written, keyed by artifact name.
    """
    out = ensure_dir(out_dir)
    written: dict[str, Path] = {}

    payload = report_payload(report, config)
    if sweep is not None:
        payload["sweep"] = {
            "parameter": sweep_param,
            "points": [
                {
                    "value": value,
                    "mean_error": rep.mean_error,
                    "std_error": rep.std_error,
                }
                for value, rep in sweep
            ],
        }
    path = out / "report.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    written["report"] = path

    last = next(
        (o for o in reversed(report.outcomes) if o.predictions is not None), None
    )
    if last is not None:
        path = out / "predictions.csv"
        write_predictions(path, last.predictions, last.soft_labels)
        written["predictions"] = path

    if sweep is not None:
        path = out / "curve.csv"
        with open(path, "w") as fh:
            fh.write(f"{sweep_param},mean_error,std_error\n")
            for value, rep in sweep:
                fh.write(f"{value},{rep.mean_error},{rep.std_error}\n")
        written["curve"] = path
    return written
