import pytest
from hypothesis import settings

from resgraph.document import corpus_names, load
from resgraph.graph import ResolutionGraph

# exact arithmetic on a shared single core: timings vary too much for deadlines
settings.register_profile("exact", deadline=None)
settings.load_profile("exact")


def chain(weights, prefix="C"):
    ids = [f"{prefix}{k + 1}" for k in range(len(weights))]
    return ResolutionGraph.build(zip(ids, weights), zip(ids, ids[1:]))


def star(center, leaves):
    ids = [f"C{k + 1}" for k in range(len(leaves) + 1)]
    return ResolutionGraph.build(zip(ids, [center, *leaves]), [("C1", v) for v in ids[1:]])


@pytest.fixture
def example51():
    return load("example5-1").graph


@pytest.fixture
def example52():
    return load("example5-2").graph


@pytest.fixture(params=corpus_names())
def corpus_graph(request):
    return load(request.param).graph


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if not REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in REPORT:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
