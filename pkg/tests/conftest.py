import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rsumset import IntSet, ModSet

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)


def int_sets(min_size=1, max_size=12, lo=-40, hi=40):
    return st.lists(st.integers(lo, hi), min_size=min_size, max_size=max_size, unique=True).map(IntSet)


@st.composite
def mod_pairs(draw, min_size=1, primes=SMALL_PRIMES):
    p = draw(st.sampled_from(primes))
    a = draw(st.lists(st.integers(0, p - 1), min_size=min(min_size, p), max_size=p, unique=True))
    b = draw(st.lists(st.integers(0, p - 1), min_size=min(min_size, p), max_size=p, unique=True))
    return ModSet(p, a), ModSet(p, b)


@pytest.fixture
def tmp_ckpt(tmp_path):
    return str(tmp_path / "sweep.ckpt")
