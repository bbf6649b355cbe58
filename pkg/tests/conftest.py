import itertools
import os
import re

import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

from ecckit.graph import build_graph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("quick", max_examples=15, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def small_graphs(draw, min_n=1, max_n=9, max_m=None):
    """Random simple graphs on up to max_n vertices, edge count optionally capped."""
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=max_m)) if pairs else []
    return build_graph(chosen, n_hint=n)


def complete(n):
    return build_graph(itertools.combinations(range(n), 2), n_hint=n)


def cycle(n):
    return build_graph([(i, (i + 1) % n) for i in range(n)], n_hint=n)


def path(n):
    return build_graph([(i, i + 1) for i in range(n - 1)], n_hint=n)


def complete_bipartite(a, b):
    return build_graph([(i, a + j) for i in range(a) for j in range(b)], n_hint=a + b)


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return build_graph(outer + spokes + inner, n_hint=10)


def bowtie():
    return build_graph([(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])


def empty(n):
    return build_graph([], n_hint=n)


# --------------------------------------------------------------- acceptance report

ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(re.match(r"\d+", k).group()), k)):
        terminalreporter.write_line(ACCEPTANCE[key])
