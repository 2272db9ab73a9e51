import pytest
from hypothesis import given, strategies as st

from fsideals import naive
from fsideals.errors import InvalidInput
from fsideals.partition import h1_profile, in_cell, partition_index


def test_examples():
    assert [partition_index(x) for x in (1, 2, 3, 4, 12, 1024)] == [0, 1, 0, 2, 2, 10]
    with pytest.raises(InvalidInput):
        partition_index(0)


@given(st.integers(1, 2**40))
def test_unique_cell(x):
    cells = [k for k in range(x.bit_length()) if in_cell(x, k)]
    assert cells == [partition_index(x)]


def test_profile_against_naive():
    D = [1, 3, 9, 27]
    prof = h1_profile(D)
    sums = naive.fs(D)
    assert prof.total == len(sums) == 15
    for k, (inside, outside) in prof.per_cell.items():
        assert inside == sum(1 for s in sums if in_cell(s, k))
        assert inside + outside == 15
    # 40 = 2^5 + 8 is the largest sum, so cells run 0..5
    assert sorted(prof.per_cell) == list(range(6))
    assert prof.max_cell == 0


def test_csv_and_json():
    prof = h1_profile([1, 2, 4])
    assert prof.to_csv().splitlines() == ["k,in_cell,complement", "0,4,3", "1,2,5", "2,1,6"]
    assert prof.to_json()["min_complement"] == 3
    with pytest.raises(InvalidInput):
        h1_profile([])
