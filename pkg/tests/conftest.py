from pathlib import Path

import pytest
from hypothesis import strategies as st

from acfx.words import free_reduce, parse_word

FIXTURES = Path(__file__).parent / "fixtures"


def W(text: str):
    return parse_word(text)


letters = st.integers(1, 3).flatmap(lambda g: st.sampled_from((g, -g)))
raw_words = st.lists(letters, max_size=14)
words = raw_words.map(free_reduce)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
