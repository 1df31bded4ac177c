"""Yin-Yang classification dataset: generation, input encodings and a shallow-vs-deep benchmark."""

from .geometry import ClassLabel, GeometryParams, classify, which_class
from .sampler import Dataset, Sample, SplitSpec, default_splits, features, generate
from .rng import Xoshiro256

__all__ = [
    "ClassLabel",
    "Dataset",
    "GeometryParams",
    "Sample",
    "SplitSpec",
    "Xoshiro256",
    "classify",
    "default_splits",
    "features",
    "generate",
    "which_class",
]

__version__ = "0.1.0"
