"""Benchmark protocols: scenario comparison, hidden-size sweep, aggregation."""

import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field


from .sampler import default_splits
from .tinynet import MlpArchitecture, TrainConfig, evaluate, train

SHUFFLE_SEED_OFFSET = 10**6
DEFAULT_SWEEP_SIZES = (5, 10, 15, 20, 30, 50, 100, 200)


@dataclass(frozen=True)
class Scenario:
    kind: str  # "deep", "shallow" or "frozen"
    hidden: int = None

    def __post_init__(self):
        if self.kind not in ("deep", "shallow", "frozen"):
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        if self.kind == "shallow":
            object.__setattr__(self, "hidden", None)
        elif self.hidden is None or self.hidden < 1:
            raise ValueError(f"{self.kind} scenario needs hidden >= 1")

    @classmethod
    def deep(cls, hidden):
        return cls("deep", hidden)

    @classmethod
    def frozen_deep(cls, hidden):
        return cls("frozen", hidden)

    @classmethod
    def shallow(cls):
        return cls("shallow")

    def architecture(self):
        if self.kind == "shallow":
            return MlpArchitecture.shallow()
        return MlpArchitecture.deep(self.hidden, freeze_lower=self.kind == "frozen")

    @property
    def name(self):
        if self.kind == "shallow":
            return "shallow"
        return f"{self.kind}-{self.hidden}"

    def to_dict(self):
        return {"kind": self.kind, "hidden": self.hidden}

    @classmethod
    def from_dict(cls, d):
        return cls(d["kind"], d.get("hidden"))


@dataclass
class RunResult:
    scenario: Scenario
    seed: int
    shuffle_seed: int
    final_test_accuracy: float
    curves: dict
    confusion: list
    test_predictions: list = field(default_factory=list)
    epochs: int = 0

    def to_dict(self):
        return {
            "scenario": self.scenario.to_dict(),
            "seed": self.seed,
            "shuffle_seed": self.shuffle_seed,
            "epochs": self.epochs,
            "final_test_accuracy": self.final_test_accuracy,
            "confusion": self.confusion,
            "curves": self.curves,
            "test_predictions": self.test_predictions,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            scenario=Scenario.from_dict(d["scenario"]),
            seed=d["seed"],
            shuffle_seed=d["shuffle_seed"],
            final_test_accuracy=d["final_test_accuracy"],
            curves=d["curves"],
            confusion=d["confusion"],
            test_predictions=d.get("test_predictions", []),
            epochs=d.get("epochs", len(d["curves"].get("train_error", []))),
        )


def single_run(scenario, init_seed, shuffle_seed, cfg=None, splits=None):
    """Train one network and evaluate it on the test split. Returns ``(RunResult, net)``."""
    cfg = TrainConfig() if cfg is None else cfg
    cfg = TrainConfig(**{**cfg.__dict__, "init_seed": init_seed, "shuffle_seed": shuffle_seed})
    train_ds, val_ds, test_ds = default_splits() if splits is None else splits
    net, curves = train(scenario.architecture(), cfg, train_ds, val_ds)
    ev = evaluate(net, test_ds)
    result = RunResult(
        scenario=scenario,
        seed=init_seed,
        shuffle_seed=shuffle_seed,
        final_test_accuracy=ev.accuracy,
        curves={"train_error": curves.train_error, "validation_error": curves.validation_error},
        confusion=ev.confusion.tolist(),
        test_predictions=ev.predictions.tolist(),
        epochs=cfg.epochs,
    )
    return result, net


def _run_job(job):
    scenario, init_seed, shuffle_seed, cfg = job
    return single_run(scenario, init_seed, shuffle_seed, cfg)[0]


def run_seeds(n_runs, base_seed):
    """(init_seed, shuffle_seed) for each run index."""
    return [(base_seed + i, base_seed + SHUFFLE_SEED_OFFSET + i) for i in range(n_runs)]


def run_scenario(scenario, n_runs, base_seed=0, cfg=None, workers=1, cache=None):
    """Train ``n_runs`` networks on the default splits.

    Run i uses ``init_seed = base_seed + i`` and
    ``shuffle_seed = base_seed + 10**6 + i``. ``cache`` is an optional dict
    keyed by ``(scenario, init_seed, shuffle_seed, hyperparameters)`` shared between
    calls so repeated configurations are trained once.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    cfg = TrainConfig() if cfg is None else cfg
    cache = {} if cache is None else cache
    jobs = [(scenario, a, b, cfg) for a, b in run_seeds(n_runs, base_seed)]
    hyper = (cfg.epochs, cfg.batch_size, cfg.lr, cfg.beta1, cfg.beta2, cfg.eps)
    keys = [(scenario, a, b, hyper) for _, a, b, _ in jobs]
    todo = [job for job, key in zip(jobs, keys) if key not in cache]
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            done = list(pool.map(_run_job, todo))
    else:
        done = [_run_job(job) for job in todo]
    for job, res in zip(todo, done):
        cache[(job[0], job[1], job[2], hyper)] = res
    return [cache[k] for k in keys]


@dataclass
class Summary:
    n: int
    mean: float
    std: float  # nan when n < 2
    min: float
    max: float

    def to_dict(self):
        return {"n": self.n, "mean": self.mean, "std": None if math.isnan(self.std) else self.std,
                "min": self.min, "max": self.max}


def summarize(values, require_std=True):
    """Mean, unbiased sample std, min and max.

    Raises ``ValueError`` for an empty input, and for fewer than two values
    unless ``require_std`` is false (the std is then NaN).
    """
    vals = [float(getattr(v, "final_test_accuracy", v)) for v in values]
    if not vals:
        raise ValueError("cannot summarize an empty sequence")
    if len(vals) < 2 and require_std:
        raise ValueError("need at least two values for a sample standard deviation")
    std = statistics.stdev(vals) if len(vals) >= 2 else math.nan
    return Summary(len(vals), statistics.fmean(vals), std, min(vals), max(vals))


TABLE1_CELLS = (
    Scenario.deep(20),
    Scenario.deep(30),
    Scenario.frozen_deep(20),
    Scenario.frozen_deep(30),
    Scenario.shallow(),
)


@dataclass
class Table1:
    runs: dict  # Scenario -> list[RunResult]
    summaries: dict  # Scenario -> Summary of test accuracy

    def to_dict(self):
        return {
            "cells": [
                {"scenario": s.to_dict(), "name": s.name, "summary": self.summaries[s].to_dict(),
                 "runs": [r.to_dict() for r in self.runs[s]]}
                for s in self.runs
            ]
        }


def table1(n_runs=20, base_seed=0, cfg=None, workers=1, cache=None):
    runs, summaries = {}, {}
    for s in TABLE1_CELLS:
        runs[s] = run_scenario(s, n_runs, base_seed, cfg, workers, cache)
        summaries[s] = summarize(runs[s], require_std=False)
    return Table1(runs, summaries)


@dataclass
class SweepResult:
    errors: dict  # hidden size -> list of final test errors
    runs: dict  # hidden size -> list[RunResult]

    def mean(self, h):
        return statistics.fmean(self.errors[h])

    def std(self, h):
        return statistics.stdev(self.errors[h])

    def to_dict(self):
        return {
            "sizes": [
                {"hidden": h, "errors": self.errors[h], "mean": self.mean(h), "std": self.std(h),
                 "curves": [r.curves for r in self.runs[h]]}
                for h in sorted(self.errors)
            ]
        }


def hidden_sweep(sizes=DEFAULT_SWEEP_SIZES, reps=10, base_seed=0, cfg=None, workers=1, cache=None):
    if not sizes:
        raise ValueError("sizes must be non-empty")
    if reps < 2:
        raise ValueError("reps must be >= 2")
    errors, runs = {}, {}
    for h in sizes:
        res = run_scenario(Scenario.deep(h), reps, base_seed, cfg, workers, cache)
        runs[h] = res
        errors[h] = [1.0 - r.final_test_accuracy for r in res]
    return SweepResult(errors, runs)
