"""Balanced, seeded dataset generation by rejection sampling."""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .geometry import DEFAULT_GEOMETRY, ClassLabel, GeometryParams, which_class, inside_big_circle
from .rng import Xoshiro256

MAX_ATTEMPTS = 10**6

# round-robin goal order for sample i is GOAL_ORDER[i % 3]
GOAL_ORDER = (ClassLabel.YIN, ClassLabel.YANG, ClassLabel.DOT)

DEFAULT_SEEDS = {"train": 42, "validation": 41, "test": 40}
DEFAULT_SIZES = {"train": 5000, "validation": 1000, "test": 1000}


class GeometryConfigError(RuntimeError):
    """Rejection sampling exhausted its attempt budget."""


class Sample(NamedTuple):
    x: float
    y: float
    label: ClassLabel


@dataclass
class Dataset:
    samples: list
    seed: int
    size: int
    geometry: GeometryParams = DEFAULT_GEOMETRY

    def __len__(self):
        return len(self.samples)

    def coords(self):
        return np.array([(s.x, s.y) for s in self.samples], dtype=np.float64).reshape(-1, 2)

    def labels(self):
        return np.array([int(s.label) for s in self.samples], dtype=np.int64)

    def feature_matrix(self):
        """(n, 4) matrix of symmetrised features, one row per sample."""
        return np.array([features(s, self.geometry) for s in self.samples], dtype=np.float64).reshape(-1, 4)

    def class_counts(self):
        counts = [0, 0, 0]
        for s in self.samples:
            counts[int(s.label)] += 1
        return tuple(counts)


@dataclass(frozen=True)
class SplitSpec:
    train: tuple = (DEFAULT_SEEDS["train"], DEFAULT_SIZES["train"])
    validation: tuple = (DEFAULT_SEEDS["validation"], DEFAULT_SIZES["validation"])
    test: tuple = (DEFAULT_SEEDS["test"], DEFAULT_SIZES["test"])

    def __post_init__(self):
        seeds = {self.train[0], self.validation[0], self.test[0]}
        if len(seeds) != 3:
            raise ValueError("train, validation and test seeds must be pairwise distinct")


def sample_one(rng, goal, g=DEFAULT_GEOMETRY, *, with_attempts=False):
    """Draw points uniformly on the bounding square until one has class ``goal``.

    Each proposal consumes two uniforms, x first then y.
    """
    goal = ClassLabel(goal)
    side = 2 * g.r_big
    for attempt in range(1, MAX_ATTEMPTS + 1):
        x = rng.uniform() * side
        y = rng.uniform() * side
        p = (x, y)
        if inside_big_circle(p, g) and which_class(p, g) is goal:
            s = Sample(x, y, goal)
            return (s, attempt) if with_attempts else s
    raise GeometryConfigError(f"no {goal.name} sample accepted after {MAX_ATTEMPTS} proposals")


def generate(seed, size, g=DEFAULT_GEOMETRY):
    if size < 1:
        raise ValueError(f"size must be >= 1, got {size}")
    rng = Xoshiro256(seed)
    samples = [sample_one(rng, GOAL_ORDER[i % 3], g) for i in range(size)]
    return Dataset(samples=samples, seed=int(seed), size=int(size), geometry=g)


def generate_splits(spec=SplitSpec(), g=DEFAULT_GEOMETRY):
    return tuple(generate(seed, size, g) for seed, size in (spec.train, spec.validation, spec.test))


_split_cache = {}


def default_splits():
    """(train, validation, test) with the default seeds and sizes.

    Results are memoised; treat the returned datasets as read-only.
    """
    if "default" not in _split_cache:
        _split_cache["default"] = generate_splits()
    return _split_cache["default"]


def features(s, g=DEFAULT_GEOMETRY):
    side = 2 * g.r_big
    x = s.x / side
    y = s.y / side
    return (x, y, 1.0 - x, 1.0 - y)
