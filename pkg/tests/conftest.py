import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from copref.data import fixture_path  # noqa: E402
from copref.graph import WeightedGraph  # noqa: E402

import oracles  # noqa: E402


def graph_from(adj, prefix="n"):
    return WeightedGraph.from_adjacency(np.asarray(adj, dtype=float), [f"{prefix}{i}" for i in range(len(adj))])


@pytest.fixture
def two_triangles():
    return graph_from(oracles.two_triangles())


@pytest.fixture
def cliques5():
    return graph_from(oracles.two_cliques_bridge(5))


@pytest.fixture
def fixture_files():
    return {name: fixture_path(name) for name in ("reviews.csv", "emoji.tsv", "ratings.csv")}


# ---- acceptance summary: one PASS/FAIL line per criterion -------------------

_CRITERIA: dict[int, list] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, text = marker.args
    entry = _CRITERIA.setdefault(number, [text, None, []])
    if rep.failed:
        entry[1] = "FAIL"
    elif rep.skipped and entry[1] is None:
        entry[1] = "SKIP"
    elif rep.when == "call" and entry[1] is None:
        entry[1] = "PASS"
    if rep.when == "call":
        entry[2].extend(v for k, v in item.user_properties if k == "detail")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        text, status, details = _CRITERIA[number]
        line = f"criterion {number}: {status or 'NOT RUN'} - {text}"
        if details:
            line += " [" + "; ".join(details) + "]"
        terminalreporter.write_line(line)
