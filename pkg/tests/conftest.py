import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from berez.grassmann import GrassmannElement
from berez.oracle import random_even_supermatrix

ACCEPTANCE_LINES = []


def g(n, *indices, coeff=1):
    """Monomial helper: g(4, 1, 2) is g1 g2 in the algebra with 4 generators."""
    return GrassmannElement.monomial(n, indices, coeff)


def scalar(n, value):
    return GrassmannElement.scalar(n, value)


small_fractions = st.builds(
    Fraction,
    st.integers(min_value=-6, max_value=6),
    st.integers(min_value=1, max_value=4),
)


@st.composite
def elements(draw, n=None, parity=None, max_terms=4):
    n = draw(st.integers(min_value=0, max_value=5)) if n is None else n
    masks = [m for m in range(1 << n) if parity is None or m.bit_count() % 2 == parity]
    if not masks:
        return scalar(n, 0)
    chosen = draw(st.lists(st.sampled_from(masks), max_size=max_terms, unique=True))
    return GrassmannElement(n, {m: draw(small_fractions) for m in chosen})


@st.composite
def element_triples(draw):
    n = draw(st.integers(min_value=0, max_value=5))
    return tuple(draw(elements(n=n)) for _ in range(3))


@st.composite
def seeded_supermatrix(draw, dims=((1, 1), (2, 1), (1, 2), (2, 2)), n_choices=(2, 4)):
    p, q = draw(st.sampled_from(dims))
    n = draw(st.sampled_from(n_choices))
    seed = draw(st.integers(min_value=0, max_value=10**6))
    return random_even_supermatrix(random.Random(seed), p, q, n)


@pytest.fixture
def rng():
    return random.Random(20051027)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
