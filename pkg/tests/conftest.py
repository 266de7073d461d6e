import functools
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from bsgroupoid.desing import build_desingularization  # noqa: E402
from bsgroupoid.forest import BassSerreForest, ForestBallAction  # noqa: E402
from bsgroupoid.io import first_gog, load_fixture  # noqa: E402
from bsgroupoid.words import Pi1  # noqa: E402

FIXTURES = ("seg", "loop", "amal", "chain", "zline")


@functools.lru_cache(maxsize=None)
def gog(name):
    return first_gog(load_fixture(name))


@functools.lru_cache(maxsize=None)
def pi1(name):
    return Pi1(gog(name))


@functools.lru_cache(maxsize=None)
def forest(name):
    return BassSerreForest(pi1(name))


@functools.lru_cache(maxsize=None)
def window(name, L=4, r=3):
    return ForestBallAction(forest(name), L, r)


@functools.lru_cache(maxsize=None)
def desing(name, L=4, r=3):
    return build_desingularization(window(name, L, r))


@pytest.fixture
def seg():
    return pi1("seg")


@pytest.fixture
def loop():
    return pi1("loop")


@pytest.fixture
def amal():
    return pi1("amal")


from hypothesis import settings  # noqa: E402

settings.register_profile("repro", derandomize=True, deadline=None, max_examples=60)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repro"))
