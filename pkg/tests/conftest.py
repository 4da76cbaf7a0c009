import random

import pytest
from hypothesis import settings
from hypothesis import strategies as st

# word algebra on length-40 products is slow on small machines; keep runs reproducible
settings.register_profile("repo", deadline=None, derandomize=True)
settings.load_profile("repo")

from surfbundle.mcg import TwistWord

twist_letters = st.tuples(st.integers(1, 5), st.sampled_from((1, -1)))


@st.composite
def twist_words(draw, max_len=20):
    return TwistWord.from_letters(draw(st.lists(twist_letters, max_size=max_len)))


group_letters = st.sampled_from((1, -1, 2, -2, 3, -3, 4, -4))
fiber_words = st.lists(group_letters, max_size=12).map(tuple)


def seeded_words(count, max_len, seed):
    rng = random.Random(seed)
    letters = [(i, e) for i in range(1, 6) for e in (1, -1)]
    return [
        TwistWord.from_letters(rng.choice(letters) for _ in range(rng.randint(0, max_len)))
        for _ in range(count)
    ]


@pytest.fixture
def rng():
    return random.Random(20261018)
