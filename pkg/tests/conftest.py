import random

import pytest


@pytest.fixture
def rng():
    return random.Random(12345)


def growth_stream(r, length, start=None):
    """Random D obeying d_n > 2 * (d_0 + ... + d_{n-1})."""
    out, total = [], 0
    x = start or r.randint(1, 5)
    for _ in range(length):
        x = max(x, 2 * total + 1) + r.randint(0, total + 3)
        out.append(x)
        total += x
    return out
