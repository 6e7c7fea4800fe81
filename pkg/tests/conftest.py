import random

import hypothesis
import pytest

hypothesis.settings.register_profile(
    "suite", deadline=None, max_examples=60, derandomize=True)
hypothesis.settings.load_profile("suite")


@pytest.fixture()
def rng():
    return random.Random(0xECC)
