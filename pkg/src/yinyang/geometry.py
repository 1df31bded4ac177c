"""Regions of the yin-yang symbol.

The symbol is a big circle of radius ``r_big`` centred at ``(r_big, r_big)``.
Two dot centres sit on the horizontal line ``y = r_big`` at ``0.5 * r_big``
(left) and ``1.5 * r_big`` (right). Circles of radius ``r_big / 2`` around the
dot centres form the S-shaped boundary; circles of radius ``r_small`` around
them are the dots. Yin is the upper half plus the right mid-circle, minus the
left mid-circle; Yang is the remainder.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np


class ClassLabel(enum.IntEnum):
    YIN = 0
    YANG = 1
    DOT = 2


@dataclass(frozen=True)
class GeometryParams:
    r_big: float = 0.5
    r_small: float = 0.1

    def __post_init__(self):
        if not (0 < self.r_small < self.r_big / 2):
            raise ValueError(
                f"need 0 < r_small < r_big/2, got r_big={self.r_big}, r_small={self.r_small}"
            )

    @property
    def center(self):
        return (self.r_big, self.r_big)

    @property
    def left_dot(self):
        return (0.5 * self.r_big, self.r_big)

    @property
    def right_dot(self):
        return (1.5 * self.r_big, self.r_big)

    def scaled(self, s):
        return GeometryParams(self.r_big * s, self.r_small * s)

    def area(self, label):
        """Analytic area of a class region."""
        dot = math.pi * self.r_small**2
        if ClassLabel(label) is ClassLabel.DOT:
            return 2 * dot
        return math.pi * self.r_big**2 / 2 - dot


DEFAULT_GEOMETRY = GeometryParams()


def dist_to_left_dot(p, g=DEFAULT_GEOMETRY):
    cx, cy = g.left_dot
    return math.hypot(p[0] - cx, p[1] - cy)


def dist_to_right_dot(p, g=DEFAULT_GEOMETRY):
    cx, cy = g.right_dot
    return math.hypot(p[0] - cx, p[1] - cy)


def inside_big_circle(p, g=DEFAULT_GEOMETRY):
    return math.hypot(p[0] - g.r_big, p[1] - g.r_big) <= g.r_big


def which_class(p, g=DEFAULT_GEOMETRY):
    """Label of a point inside the big circle.

    Boundary points resolve in test order: Dot first, then Yin.
    """
    if not inside_big_circle(p, g):
        raise ValueError(f"point {tuple(p)} lies outside the big circle")
    d_left = dist_to_left_dot(p, g)
    d_right = dist_to_right_dot(p, g)
    if d_left <= g.r_small or d_right <= g.r_small:
        return ClassLabel.DOT
    m = g.r_big / 2
    if d_right <= m or (d_left > m and p[1] > g.r_big):
        return ClassLabel.YIN
    return ClassLabel.YANG


def classify(x, y, g=DEFAULT_GEOMETRY):
    """Vectorised labels for coordinate arrays.

    Points outside the big circle get -1 instead of raising.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    lx, ly = g.left_dot
    rx, ry = g.right_dot
    inside = np.hypot(x - g.r_big, y - g.r_big) <= g.r_big
    d_left = np.hypot(x - lx, y - ly)
    d_right = np.hypot(x - rx, y - ry)
    m = g.r_big / 2
    dot = (d_left <= g.r_small) | (d_right <= g.r_small)
    yin = (d_right <= m) | ((d_left > m) & (y > g.r_big))
    out = np.where(dot, int(ClassLabel.DOT), np.where(yin, int(ClassLabel.YIN), int(ClassLabel.YANG)))
    return np.where(inside, out, -1)
