import numpy as np
import pytest

from conftest import SVG_NS, count_glyphs, polyline_vertices, svg_root
from yinyang import plotting
from yinyang.sampler import generate


@pytest.fixture(scope="module")
def test_set():
    return generate(40, 1000)


def _curves(n=300):
    e = np.linspace(0.6, 0.05, n)
    return {"train_error": list(e), "validation_error": list(e + 0.01)}


def _well_formed(svg):
    root = svg_root(svg)
    assert root.tag == SVG_NS + "svg"
    vb = [float(v) for v in root.get("viewBox").split()]
    assert vb[2] > 0 and vb[3] > 0


def test_scatter_has_one_glyph_per_sample(test_set):
    svg = plotting.render_svg(plotting.scatter_figure(test_set))
    _well_formed(svg)
    total = sum(count_glyphs(svg, f"class-{name}") for name in ("yin", "yang", "dot"))
    assert total == 1000
    assert count_glyphs(svg, "class-dot") == test_set.class_counts()[2]


def test_curves_have_one_vertex_per_epoch():
    svg = plotting.render_svg(plotting.curves_figure(_curves()))
    _well_formed(svg)
    assert polyline_vertices(svg, "train_error") == 300
    assert polyline_vertices(svg, "validation_error") == 300


def test_overlay_marks_only_mistakes(test_set):
    labels = test_set.labels()
    perfect = plotting.render_svg(plotting.test_overlay_figure(test_set, labels))
    _well_formed(perfect)
    assert count_glyphs(perfect, "misclassified") == 0
    pred = labels.copy()
    pred[:7] = (pred[:7] + 1) % 3
    svg = plotting.render_svg(plotting.test_overlay_figure(test_set, pred))
    assert count_glyphs(svg, "misclassified") == 7
    total = sum(count_glyphs(svg, f"pred-{name}") for name in ("yin", "yang", "dot"))
    assert total == 1000


def test_overlay_rejects_length_mismatch(test_set):
    with pytest.raises(ValueError):
        plotting.test_overlay_figure(test_set, [0, 1])


def test_confusion_grid_annotations():
    cm = [[300, 20, 13], [5, 320, 8], [0, 2, 332]]
    svg = plotting.render_svg(plotting.confusion_figure(cm))
    _well_formed(svg)
    root = svg_root(svg)
    texts = {}
    for el in root.iter():
        gid = el.get("id", "")
        if gid.startswith("cell-"):
            texts[gid] = "".join(el.itertext()).strip()
    assert texts == {f"cell-{i}-{j}": str(cm[i][j]) for i in range(3) for j in range(3)}


def test_sweep_figure():
    doc = {"sizes": [{"hidden": h, "mean": 1.0 / h, "std": 0.01, "errors": []} for h in (5, 10, 30)]}
    svg = plotting.render_svg(plotting.sweep_figure(doc))
    _well_formed(svg)
    assert plotting.render_svg(plotting.sweep_figure(doc)) == svg


@pytest.mark.parametrize("kind", plotting.FIGURE_KINDS)
def test_figures_regenerate_byte_identically(kind, test_set):
    build = {
        "scatter": lambda: plotting.scatter_figure(test_set),
        "curves": lambda: plotting.curves_figure(_curves(50)),
        "sweep": lambda: plotting.sweep_figure({"sizes": [{"hidden": 5, "mean": 0.2, "std": None}]}),
        "test_overlay": lambda: plotting.test_overlay_figure(test_set, np.zeros(1000, dtype=int)),
        "confusion": lambda: plotting.confusion_figure(np.eye(3, dtype=int) * 5),
    }[kind]
    assert plotting.render_svg(build()) == plotting.render_svg(build())
