from fractions import Fraction

import pytest

from fsideals.errors import InvalidInput
from fsideals.ideals import OracleConfig, judge, recheck, summable_weight


def test_weight_exact():
    assert summable_weight([0, 1, 2]) == Fraction(11, 6)
    assert summable_weight([]) == 0
    with pytest.raises(InvalidInput):
        summable_weight([-1])


def test_config_validation():
    with pytest.raises(InvalidInput):
        OracleConfig("hindman")
    with pytest.raises(InvalidInput):
        OracleConfig("hindman", fs_depth=2, ap_length=3)
    with pytest.raises(InvalidInput):
        OracleConfig("nope", fs_depth=2)
    with pytest.raises(InvalidInput):
        OracleConfig.summable(0)
    assert OracleConfig.hindman().fs_depth == 4
    assert OracleConfig.vdw().ap_length == 5
    assert OracleConfig.summable().weight_threshold == 10


def test_summable_judgement():
    j = judge(range(10), OracleConfig.summable(5))
    assert j.positive is False and j.weight == sum(Fraction(1, k) for k in range(1, 11))
    j = judge(range(1000), OracleConfig.summable(5))
    assert j.positive and recheck(range(1000), j)


def test_vdw_judgement():
    A = [3, 5, 7, 9, 11, 40]
    j = judge(A, OracleConfig.vdw(4))
    assert j.positive and j.evidence.terms() == [3, 5, 7, 9] and recheck(A, j)
    assert not judge(A, OracleConfig.vdw(6)).positive
    assert not judge([], OracleConfig.vdw(2)).positive


def test_hindman_judgement_ignores_zero():
    j = judge([0, 1, 2, 3], OracleConfig.hindman(2))
    assert j.positive and j.evidence.ground.elements == (1, 2)
    assert recheck([0, 1, 2, 3], j)
    assert not judge([0, 1, 2, 4], OracleConfig.folkman(2)).positive
    assert judge([0], OracleConfig.hindman(1)).verdict == "small"


def test_recheck_rejects_bad_evidence():
    j = judge([1, 2, 3], OracleConfig.hindman(2))
    assert not recheck([1, 2], j)
    assert recheck([1], judge([1], OracleConfig.hindman(2)))  # small: nothing to recheck


def test_judgement_json():
    j = judge([1, 2, 3], OracleConfig.hindman(2))
    d = j.to_json()
    assert d["verdict"] == "positive" and d["depth"] == 2 and d["evidence"]["elements"] == [1, 2]
