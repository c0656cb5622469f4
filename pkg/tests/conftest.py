import random

import pytest

from wordrank.words import parse_word


@pytest.fixture
def rng():
    return random.Random(20240611)


def W(text):
    return parse_word(text)
