import itertools

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from strongprod.graph import Graph
from strongprod.kernels import available_backends

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(params=sorted(available_backends()))
def backend(request):
    return available_backends()[request.param]


@st.composite
def graphs(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def plain_colourings(g, k):
    return st.lists(st.integers(0, k - 1), min_size=g.n, max_size=g.n)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for row in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.format_result(row))
