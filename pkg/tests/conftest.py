import random

import pytest
from hypothesis import settings

from pjet.padic import RingParams, default_modulus, ring_new

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def rng():
    return random.Random(12345)


def make_ring(p, k, d=1):
    return ring_new(RingParams(p, k, d, default_modulus(p, d)))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
