import pytest
from hypothesis import given, strategies as st

from chaosieve.errors import DomainError
from chaosieve.tuples import diameter, exhaustive_narrowest, is_admissible, narrowest_tuple


@pytest.mark.parametrize("t, expected", [
    ((0, 2, 6, 8, 12), True),
    ((0, 2, 4), False),
    ((0,), True),
    ((0, 2, 6, 8), True),
    ((0, 1), False),
    ((0, 2), True),
])
def test_is_admissible(t, expected):
    assert is_admissible(t) is expected


def test_diameter():
    assert diameter((0, 2)) == 2
    assert diameter((0, 2, 6, 8)) == 8
    assert diameter((5,)) == 0


def test_malformed():
    with pytest.raises(DomainError):
        is_admissible((0, 2, 2))
    with pytest.raises(DomainError):
        narrowest_tuple(0)


def test_narrowest_small():
    assert narrowest_tuple(1) == (0,)
    assert narrowest_tuple(2) == (0, 2)
    assert diameter(narrowest_tuple(4)) <= 8
    assert diameter(narrowest_tuple(5)) <= 12


@pytest.mark.parametrize("k", range(1, 7))
def test_exhaustive_oracle(k):
    found = narrowest_tuple(k)
    assert len(found) == k and is_admissible(found)
    best = exhaustive_narrowest(k, 20)
    assert best is not None and diameter(best) <= diameter(found)
    # the greedy search is in fact optimal in this range
    assert diameter(best) == diameter(found)


@pytest.mark.parametrize("k", [10, 25, 60])
def test_output_admissible_and_deterministic(k):
    t = narrowest_tuple(k, budget=200)
    assert len(t) == k and is_admissible(t)
    assert t == narrowest_tuple(k, budget=200)


@given(st.sets(st.integers(-50, 50), min_size=1, max_size=9), st.integers(-1000, 1000))
def test_translation_invariance(offsets, c):
    t = sorted(offsets)
    assert is_admissible(t) == is_admissible([x + c for x in t])
