"""Repeated-trial experiment harness with CSV and JSON reporting.

Trial k of an experiment always runs with the seed derived from
(experiment seed, k), never from a shared generator, so results do not
depend on scheduling and a comparison can pair its two arms trial by trial.
"""

from __future__ import annotations

import dataclasses
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .core import ConfigurationError, Instance
from .ga import GaConfig, run_ga
from .hillclimb import HcConfig, run_hc

__all__ = [
    "ComparisonReport",
    "ExperimentStats",
    "TrialRecord",
    "compare",
    "derive_trial_seed",
    "format_comparison_csv",
    "format_comparison_json",
    "format_stats_json",
    "format_trials_csv",
    "run_experiment",
]

_MASK = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def derive_trial_seed(experiment_seed: int, trial_id: int) -> int:
    """Avalanche mix of (experiment seed, trial id) into a 64-bit trial seed.

    splitmix64 finalizer applied to the seed advanced by (trial_id + 1)
    golden-gamma increments. Frozen: published results reference these seeds,
    so the mapping must never change between releases.
    """
    if trial_id < 0:
        raise ValueError(f"trial_id must be >= 0, got {trial_id}")
    z = (int(experiment_seed) + _GOLDEN_GAMMA * (trial_id + 1)) & _MASK
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return z


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    seed: int
    tour_length: float
    wall_time_ms: float
    fitness_evaluations: int
    iterations: int


@dataclass(frozen=True)
class ExperimentStats:
    """Per-trial records plus summary statistics of the tour lengths.

    std is the sample standard deviation (ddof=1); a single-trial experiment
    is flagged degenerate and reports std 0. Quartiles use linear
    interpolation.
    """

    trials: tuple[TrialRecord, ...]
    mean: float
    std: float
    min: float
    q1: float
    median: float
    q3: float
    max: float
    degenerate: bool

    @classmethod
    def from_trials(cls, trials: tuple[TrialRecord, ...]) -> "ExperimentStats":
        if not trials:
            raise ValueError("need at least one trial")
        lengths = np.array([t.tour_length for t in trials], dtype=np.float64)
        degenerate = lengths.size < 2
        std = 0.0 if degenerate else float(np.std(lengths, ddof=1))
        q1, median, q3 = (float(q) for q in np.quantile(lengths, [0.25, 0.5, 0.75]))
        return cls(
            trials=tuple(trials),
            mean=float(np.mean(lengths)),
            std=std,
            min=float(lengths.min()),
            q1=q1,
            median=median,
            q3=q3,
            max=float(lengths.max()),
            degenerate=degenerate,
        )


SolverConfig = GaConfig | HcConfig


def _solve_once(instance: Instance, config: SolverConfig):
    if isinstance(config, GaConfig):
        return run_ga(instance, config)
    if isinstance(config, HcConfig):
        return run_hc(instance, config)
    raise ConfigurationError(f"unsupported config type {type(config).__name__}")


def _run_trial(payload) -> TrialRecord:
    instance, config, trial_id, experiment_seed = payload
    seed = derive_trial_seed(experiment_seed, trial_id)
    result = _solve_once(instance, dataclasses.replace(config, seed=seed))
    return TrialRecord(
        trial_id=trial_id,
        seed=seed,
        tour_length=result.best_length,
        wall_time_ms=result.wall_time_ms,
        fitness_evaluations=result.fitness_evaluations,
        iterations=result.iterations,
    )


def run_experiment(
    instance: Instance,
    config: SolverConfig,
    trials: int,
    experiment_seed: int = 0,
    parallelism: int = 1,
) -> ExperimentStats:
    """Run ``trials`` independent trials of one solver configuration.

    Trial results are identical for any parallelism level; workers only
    change how the fixed per-trial seeds are scheduled.
    """
    if trials < 1:
        raise ConfigurationError(f"trials must be >= 1, got {trials}")
    if parallelism < 1:
        raise ConfigurationError(f"parallelism must be >= 1, got {parallelism}")
    config.validate()
    if instance.n < 2:
        raise ConfigurationError(f"solver needs at least two points, got {instance.n}")
    payloads = [(instance, config, trial_id, experiment_seed) for trial_id in range(trials)]
    if parallelism == 1:
        records = [_run_trial(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            records = list(pool.map(_run_trial, payloads))
    return ExperimentStats.from_trials(tuple(records))


@dataclass(frozen=True)
class ComparisonReport:
    """Two arms run on paired per-trial seeds, plus mean ratio and improvement.

    improvement is (mean_a - mean_b) / mean_a: positive when arm b's tours
    are shorter on average.
    """

    stats_a: ExperimentStats
    stats_b: ExperimentStats
    mean_ratio: float
    improvement: float


def compare(
    instance: Instance,
    config_a: SolverConfig,
    config_b: SolverConfig,
    trials: int,
    experiment_seed: int = 0,
    parallelism: int = 1,
) -> ComparisonReport:
    """Paired comparison: trial k of both arms uses the same derived seed."""
    stats_a = run_experiment(instance, config_a, trials, experiment_seed, parallelism)
    stats_b = run_experiment(instance, config_b, trials, experiment_seed, parallelism)
    if stats_a.mean == 0.0:
        ratio = improvement = math.nan
    else:
        ratio = stats_b.mean / stats_a.mean
        improvement = (stats_a.mean - stats_b.mean) / stats_a.mean
    return ComparisonReport(stats_a, stats_b, ratio, improvement)


CSV_HEADER = "trial_id,seed,tour_length,wall_time_ms,fitness_evaluations,iterations"


def _summary_lines(stats: ExperimentStats) -> list[str]:
    return [
        f"# mean {stats.mean!r}",
        f"# std {stats.std!r}",
        f"# min {stats.min!r}",
        f"# q1 {stats.q1!r}",
        f"# median {stats.median!r}",
        f"# q3 {stats.q3!r}",
        f"# max {stats.max!r}",
        f"# trials {len(stats.trials)}",
        f"# degenerate {'true' if stats.degenerate else 'false'}",
    ]


def format_trials_csv(stats: ExperimentStats, include_timing: bool = True) -> str:
    """One row per trial, then the summary as a commented footer block.

    Floats are written with repr so they round-trip exactly. With
    ``include_timing`` off, wall_time_ms is zeroed: timing is the one field
    that legitimately differs between repeat runs of the same seeds.
    """
    lines = [CSV_HEADER]
    for r in stats.trials:
        wall = r.wall_time_ms if include_timing else 0.0
        lines.append(
            f"{r.trial_id},{r.seed},{r.tour_length!r},{wall!r},"
            f"{r.fitness_evaluations},{r.iterations}"
        )
    lines.extend(_summary_lines(stats))
    return "\n".join(lines) + "\n"


def _summary_dict(stats: ExperimentStats) -> dict:
    return {
        "mean": stats.mean,
        "std": stats.std,
        "min": stats.min,
        "q1": stats.q1,
        "median": stats.median,
        "q3": stats.q3,
        "max": stats.max,
        "trials": len(stats.trials),
        "degenerate": stats.degenerate,
    }


def _stats_doc(stats: ExperimentStats, include_timing: bool) -> dict:
    return {
        "trials": [
            {
                "trial_id": r.trial_id,
                "seed": r.seed,
                "tour_length": r.tour_length,
                "wall_time_ms": r.wall_time_ms if include_timing else 0.0,
                "fitness_evaluations": r.fitness_evaluations,
                "iterations": r.iterations,
            }
            for r in stats.trials
        ],
        "summary": _summary_dict(stats),
    }


def format_stats_json(
    stats: ExperimentStats, include_timing: bool = True, metadata: bool = True
) -> str:
    doc = _stats_doc(stats, include_timing)
    if metadata:
        doc["metadata"] = {"created": datetime.now(timezone.utc).isoformat()}
    return json.dumps(doc, indent=2) + "\n"


def format_comparison_csv(report: ComparisonReport, include_timing: bool = True) -> str:
    """Paired per-trial rows (same seed per row) with both arms' lengths."""
    lines = ["trial_id,seed,tour_length_a,tour_length_b"]
    for ra, rb in zip(report.stats_a.trials, report.stats_b.trials):
        lines.append(f"{ra.trial_id},{ra.seed},{ra.tour_length!r},{rb.tour_length!r}")
    lines.append(f"# mean_a {report.stats_a.mean!r}")
    lines.append(f"# std_a {report.stats_a.std!r}")
    lines.append(f"# mean_b {report.stats_b.mean!r}")
    lines.append(f"# std_b {report.stats_b.std!r}")
    lines.append(f"# mean_ratio {report.mean_ratio!r}")
    lines.append(f"# improvement {report.improvement!r}")
    lines.append(f"# trials {len(report.stats_a.trials)}")
    return "\n".join(lines) + "\n"


def format_comparison_json(
    report: ComparisonReport, include_timing: bool = True, metadata: bool = True
) -> str:
    doc = {
        "a": _stats_doc(report.stats_a, include_timing),
        "b": _stats_doc(report.stats_b, include_timing),
        "mean_ratio": report.mean_ratio,
        "improvement": report.improvement,
    }
    if metadata:
        doc["metadata"] = {"created": datetime.now(timezone.utc).isoformat()}
    return json.dumps(doc, indent=2) + "\n"
