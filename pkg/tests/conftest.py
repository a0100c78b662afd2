import random

from hypothesis import strategies as st

from cantorsurj.points import Point
from cantorsurj.randgen import random_filtering, random_surjection


def q(*stem, base=2):
    """Interior eventually-max point with the given stem."""
    return Point(base, tuple(stem), base - 1)


@st.composite
def points(draw, base=2, max_stem=8):
    stem = draw(st.lists(st.integers(0, base - 1), max_size=max_stem))
    tail = draw(st.integers(0, base - 1))
    return Point(base, tuple(stem), tail)


@st.composite
def filterings(draw, bases=(2, 3), max_support=4):
    # seeded generator keeps shrinking sane: one integer pins the object
    seed = draw(st.integers(0, 2**32 - 1))
    b = draw(st.sampled_from(bases))
    d = draw(st.integers(0, max_support))
    return random_filtering(random.Random(seed), b, d)


@st.composite
def surjections(draw, max_depth=3, chain_prob=0.3):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_surjection(random.Random(seed), 2, max_depth, chain_prob)
