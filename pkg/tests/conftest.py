import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from olcanneal.olcgraph import Edge, Fragment, OlcGraph  # noqa: E402


def synthetic_graph(n, pairs):
    """OlcGraph with an arbitrary edge set on ``n`` vertices.

    Every label starts and ends with ``A`` and the middles are distinct, so a
    length-1 overlap is valid for any ordered pair.
    """
    verts = tuple(Fragment(i, "A" + format(i, "b").replace("0", "C").replace("1", "G") + "A")
                  for i in range(n))
    return OlcGraph(verts, tuple(Edge(u, v, 1) for u, v in pairs))


@pytest.fixture
def make_graph():
    return synthetic_graph


_criteria_key = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_criteria_key] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; shown inline with ``-s`` and in the summary."""
    lines = request.config.stash[_criteria_key]

    def record(number, ok, detail, elapsed, limit):
        within = elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        line = f"criterion {number}: {status} ({detail}; {elapsed:.1f}s, limit {limit:.0f}s)"
        lines.append(line)
        print(line)
        return ok and within

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_criteria_key, [])
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
