from fractions import Fraction

import pytest
from hypothesis import strategies as st

from freelip.metric import FiniteMetricSpace, from_graph, gen_random, gen_tree, gen_ultrametric


def c3_space() -> FiniteMetricSpace:
    return from_graph([("0", "a", 1), ("a", "b", 1)], "0")


def e3_space() -> FiniteMetricSpace:
    return from_graph([("0", "a", 1), ("a", "b", 1), ("0", "b", 1)], "0")


@pytest.fixture
def C3():
    return c3_space()


@pytest.fixture
def E3():
    return e3_space()


F = Fraction

random_spaces = st.builds(
    gen_random,
    n=st.integers(2, 6),
    seed=st.integers(0, 10**6),
    scale=st.integers(1, 8),
)
small_spaces = st.builds(gen_random, n=st.integers(2, 5), seed=st.integers(0, 10**6), scale=st.integers(1, 6))
ultrametric_spaces = st.builds(gen_ultrametric, n=st.integers(1, 8), seed=st.integers(0, 10**6))
tree_spaces = st.builds(gen_tree, n=st.integers(2, 8), seed=st.integers(0, 10**6))
