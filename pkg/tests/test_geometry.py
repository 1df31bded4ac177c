import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from yinyang.geometry import (
    ClassLabel,
    GeometryParams,
    classify,
    dist_to_left_dot,
    dist_to_right_dot,
    inside_big_circle,
    which_class,
)

G = GeometryParams()


@pytest.mark.parametrize("p, expected", [((0.25, 0.5), 0.0), ((0.5, 0.5), 0.25), ((0.25, 0.7), 0.2)])
def test_dist_to_left_dot(p, expected):
    assert dist_to_left_dot(p, G) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("p, expected", [((0.75, 0.5), 0.0), ((0.5, 0.5), 0.25), ((0.75, 0.3), 0.2)])
def test_dist_to_right_dot(p, expected):
    assert dist_to_right_dot(p, G) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("p, expected", [((0.5, 0.5), True), ((0.5, 1.0), True), ((0.0, 0.0), False)])
def test_inside_big_circle(p, expected):
    assert inside_big_circle(p, G) is expected


@pytest.mark.parametrize(
    "p, expected",
    [
        ((0.75, 0.5), ClassLabel.DOT),
        ((0.5, 0.9), ClassLabel.YIN),
        ((0.5, 0.1), ClassLabel.YANG),
        ((0.75, 0.3), ClassLabel.YIN),
        ((0.25, 0.7), ClassLabel.YANG),
    ],
)
def test_which_class_examples(p, expected):
    assert which_class(p, G) is expected


def test_label_codes_are_frozen():
    assert [int(c) for c in (ClassLabel.YIN, ClassLabel.YANG, ClassLabel.DOT)] == [0, 1, 2]


def test_outside_point_is_a_domain_error():
    with pytest.raises(ValueError):
        which_class((0.0, 0.0), G)


@pytest.mark.parametrize("r_small", [0.0, 0.25, 0.3, -0.1])
def test_rejects_invalid_geometry(r_small):
    with pytest.raises(ValueError):
        GeometryParams(0.5, r_small)


def _uniform_in_disc(rng, n, g=G):
    pts = rng.uniform(0, 2 * g.r_big, size=(int(n * 1.4), 2))
    inside = np.hypot(pts[:, 0] - g.r_big, pts[:, 1] - g.r_big) <= g.r_big
    return pts[inside][:n]


def test_vectorised_classify_agrees_with_scalar():
    pts = _uniform_in_disc(np.random.default_rng(0), 20_000)
    vec = classify(pts[:, 0], pts[:, 1], G)
    scalar = [int(which_class(p, G)) for p in pts]
    assert np.array_equal(vec, scalar)
    assert np.all(classify([0.0, 1.0], [0.0, 1.0], G) == -1)


def _boundary_margin(x, y, g=G):
    lx, ly = g.left_dot
    rx, ry = g.right_dot
    dl = np.hypot(x - lx, y - ly)
    dr = np.hypot(x - rx, y - ry)
    dc = np.hypot(x - g.r_big, y - g.r_big)
    m = g.r_big / 2
    return np.min(
        np.stack([abs(dl - g.r_small), abs(dr - g.r_small), abs(dl - m), abs(dr - m),
                  abs(y - g.r_big), abs(dc - g.r_big)]),
        axis=0,
    )


def test_every_point_in_disc_gets_one_label():
    pts = _uniform_in_disc(np.random.default_rng(1), 100_000)
    labels = [which_class(p, G) for p in pts[:20_000]]
    assert all(label in (ClassLabel.YIN, ClassLabel.YANG, ClassLabel.DOT) for label in labels)
    assert set(np.unique(classify(pts[:, 0], pts[:, 1], G))) == {0, 1, 2}


def test_point_symmetry_under_half_turn():
    pts = _uniform_in_disc(np.random.default_rng(2), 120_000)
    pts = pts[_boundary_margin(pts[:, 0], pts[:, 1]) > 1e-9]
    assert len(pts) >= 100_000
    swap = {ClassLabel.YIN: ClassLabel.YANG, ClassLabel.YANG: ClassLabel.YIN, ClassLabel.DOT: ClassLabel.DOT}
    side = 2 * G.r_big
    for x, y in pts:
        assert which_class((side - x, side - y), G) is swap[which_class((x, y), G)]


def test_region_areas_match_analytic_values():
    rng = np.random.default_rng(3)
    n = 4_000_000
    pts = rng.uniform(0, 1, size=(n, 2))
    labels = classify(pts[:, 0], pts[:, 1], G)
    for label in ClassLabel:
        estimate = np.count_nonzero(labels == int(label)) / n
        assert estimate == pytest.approx(G.area(label), rel=0.01)


def test_analytic_areas_partition_the_disc():
    total = sum(G.area(label) for label in ClassLabel)
    assert total == pytest.approx(math.pi * G.r_big**2, rel=1e-14)


@given(
    st.floats(0.0, 1.0),
    st.floats(0.0, 1.0),
    st.sampled_from([0.25, 0.5, 2.0, 4.0, 10.0]),
)
def test_scale_equivariance(x, y, s):
    if not inside_big_circle((x, y), G) or _boundary_margin(np.array(x), np.array(y)) < 1e-9:
        return
    assert which_class((s * x, s * y), G.scaled(s)) is which_class((x, y), G)
