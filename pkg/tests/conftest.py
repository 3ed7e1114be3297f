from __future__ import annotations

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from graphprod.fixtures import fixture
from graphprod.frontend import parse_word
from graphprod.graph import SimplicialGraph
from graphprod.words import NormalForm, Presentation, reduce

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# filled by test_acceptance.py, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def presentations(draw, min_vertices=1, max_vertices=4, orders=(2, 3, None)):
    n = draw(st.integers(min_vertices, max_vertices))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = [e for e in pairs if draw(st.booleans())]
    return Presentation(SimplicialGraph.from_edges(n, edges), tuple(draw(st.sampled_from(orders)) for _ in range(n)))


def raw_words(p: Presentation, max_length=6):
    syl = st.tuples(
        st.integers(0, p.vertex_count - 1),
        st.integers(-3, 3).filter(bool),
    )
    return st.lists(syl, max_size=max_length)


@st.composite
def presentation_and_words(draw, count=1, max_length=6, **kw):
    p = draw(presentations(**kw))
    ws = [draw(raw_words(p, max_length)) for _ in range(count)]
    return p, ws


@st.composite
def presentation_and_elements(draw, count=1, max_length=6, **kw):
    p, ws = draw(presentation_and_words(count, max_length, **kw))
    return p, [reduce(p, w) for w in ws]


class W:
    """Parse words in a fixture presentation: ``W('path-raag')('a*c')``."""

    def __init__(self, name: str):
        self.p = fixture(name)

    def __call__(self, text: str) -> NormalForm:
        return reduce(self.p, parse_word(self.p, text))


@pytest.fixture
def path_raag():
    return W("path-raag")


@pytest.fixture
def two_gen():
    return W("two-generator")


@pytest.fixture
def path_z3():
    return W("path-z3")


@pytest.fixture
def dihedral():
    return W("dihedral")


@pytest.fixture
def square():
    return W("square-raag")
