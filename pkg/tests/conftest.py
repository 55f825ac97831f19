import pytest

from carc import oracle
from carc.models import ArcModel, arcs_to_chords, intersection_graph, normalize
from carc.pqsm import build_pqsm
from carc.words import CircularWord, Letter

NAMES = "abcdefghi"
WORKED = "a1 b1 c0 d1 e0 f1 h1 i0 c1 b0 e1 d0 a0 g0 i1 h0 g1 f0"


def named_word(text: str) -> CircularWord:
    """Parse 'a1 b0 ...' with vertex names a, b, ... mapped to 0, 1, ..."""
    return CircularWord(Letter(NAMES.index(t[0]), int(t[1:])) for t in text.split())


def vid(name: str) -> int:
    return NAMES.index(name)


def tree_of(m: ArcModel):
    return build_pqsm(m.graph, arcs_to_chords(normalize(m.graph, m)))


@pytest.fixture(scope="session")
def worked_model() -> ArcModel:
    w = named_word(WORKED)
    return ArcModel(w, intersection_graph(w))


@pytest.fixture(scope="session")
def worked_tree(worked_model):
    return tree_of(worked_model)


@pytest.fixture(scope="session")
def corpus5():
    return oracle.build_corpus(5)


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
