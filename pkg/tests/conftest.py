import os
import random

import pytest

DEFAULT_SEED = 1729


def make_rng() -> random.Random:
    """Seeded generator for the randomized suites, SPLITLAB_SEED overrides."""
    return random.Random(int(os.environ.get("SPLITLAB_SEED", DEFAULT_SEED)))


@pytest.fixture
def rng() -> random.Random:
    return make_rng()
