import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from yinyang.sampler import default_splits

SVG_NS = "{http://www.w3.org/2000/svg}"
GOLDEN = Path(__file__).parent / "golden"


def svg_root(data):
    if isinstance(data, (str, Path)):
        data = Path(data).read_bytes()
    return ET.fromstring(data)


def svg_group(root, gid):
    for el in root.iter():
        if el.get("id") == gid:
            return el
    return None


def count_glyphs(data, gid):
    """Number of marker instances (<use>) drawn inside the element with this id."""
    group = svg_group(svg_root(data), gid)
    if group is None:
        return 0
    return sum(1 for el in group.iter(SVG_NS + "use"))


def polyline_vertices(data, gid):
    """Vertex count of the single path inside the element with this id."""
    group = svg_group(svg_root(data), gid)
    paths = list(group.iter(SVG_NS + "path"))
    assert len(paths) == 1
    return sum(1 for tok in paths[0].get("d").split() if tok in ("M", "L"))


@pytest.fixture(scope="session")
def splits():
    return default_splits()


SWEEP_SIZES = (5, 10, 15, 20, 30)


@pytest.fixture(scope="session")
def run_cache():
    return {}


@pytest.fixture(scope="session")
def table(run_cache):
    from yinyang.experiments import table1

    return table1(n_runs=20, base_seed=0, cache=run_cache)


@pytest.fixture(scope="session")
def sweep(run_cache, table):
    from yinyang.experiments import hidden_sweep

    return hidden_sweep(SWEEP_SIZES, reps=10, base_seed=0, cache=run_cache)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "VERDICTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(lines):
        terminalreporter.write_line(lines[number])
