from __future__ import annotations

import pytest
from hypothesis import strategies as st

from symforge.corpus import random_corpus
from symforge.fixtures import load_fixture
from symforge.poly import ZERO, Poly, msq, sp, x, z

CORPUS_SEED = 20240611

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def corpus():
    return random_corpus(CORPUS_SEED, 200)


@pytest.fixture
def fig1():
    return load_fixture("fig1")


@pytest.fixture
def bubble():
    return load_fixture("bubble")


@pytest.fixture
def triangle():
    return load_fixture("triangle")


_ATOMS = [x(1), x(2), x(3), x(4), z(1), z(2), sp(1, 1), sp(1, 2), msq(1)]


@st.composite
def polys(draw, max_terms: int = 4, atoms=_ATOMS):
    out = ZERO
    for _ in range(draw(st.integers(0, max_terms))):
        term = Poly.const(draw(st.integers(-5, 5)))
        for a in draw(st.lists(st.sampled_from(atoms), max_size=3)):
            term = term * a
        out = out + term
    return out
