import random
from dataclasses import replace

import pytest

from fsideals import naive
from fsideals.errors import InvalidChain, InvalidInput
from fsideals.ground import GroundSet, greedy_very_sparse, naturals, support_masks
from fsideals.refine import check_report, refine_avoid, refine_fs1

D6 = (1, 3, 9, 27, 81, 243)


def test_fs1_constant_chain():
    D0 = (1, 3, 9, 27)
    rep = refine_fs1(D0, [D0] * 3, 3)
    assert rep.output.elements == (1, 3, 9)
    assert [t.cutoff for t in rep.per_target] == [0, 0, 0] and rep.all_verified


def test_fs1_supports_stay_disjoint():
    rep = refine_fs1(D6, [D6, (4, 36)], 2)
    # 4 = 1 + 3 reuses the support of e_0 = 1, so e_1 moves on to 36 = 9 + 27
    assert rep.output.elements == (1, 36)
    assert [t.cutoff for t in rep.per_target] == [0, 1] and rep.all_verified
    masks = support_masks(D6)
    assert masks[1] & masks[36] == 0


def test_fs1_errors():
    with pytest.raises(InvalidChain):
        refine_fs1(D6, [D6, (2,)], 2)
    with pytest.raises(InvalidInput):
        refine_fs1((1, 2), [(1, 2)], 1)
    with pytest.raises(InvalidInput):
        refine_fs1(D6, [D6], 2)


def test_fs1_exhausted():
    rep = refine_fs1((1, 3), [(1, 3), (3,), (3,)], 3)
    assert rep.exhausted_at == 2 and rep.output.elements == (1, 3)


def test_avoid_examples():
    rep = refine_avoid(D6, [{1, 3, 4}], 3)
    assert rep.all_verified and rep.per_target[0].cutoff == 0
    assert naive.fs(rep.output.elements).isdisjoint({1, 3, 4})
    assert naive.fs(rep.output.elements) <= naive.fs(D6)
    rep = refine_avoid((1, 2), [{1, 2, 3}], 1)
    assert rep.exhausted_at == 0 and rep.output.elements == ()


def test_avoid_empty_family_is_identity():
    rep = refine_avoid(D6, [set(), set()])
    assert rep.output.elements == D6
    assert [t.cutoff for t in rep.per_target] == [0, 0] and rep.all_verified


def test_avoid_thins_non_sparse_input():
    rep = refine_avoid((1, 2, 3, 4, 10, 30, 100), [{1}])
    assert rep.stages[0]["thinned"]
    assert rep.all_verified


def test_mutation_is_caught():
    rep = refine_avoid(D6, [{1, 3, 4}, set(range(1, 30))], 4)
    assert rep.all_verified
    # the base is very sparse, so 2x is never in FS(base) for x in FS(base)
    for i in range(len(rep.output)):
        els = list(rep.output.elements)
        els[i] *= 2
        if len(set(els)) < len(els):
            continue
        bad = check_report(replace(rep, output=GroundSet.of(els)))
        assert not bad.all_verified


def test_random_dyadic_families():
    r = random.Random(7)
    D = greedy_very_sparse(naturals(), 10)
    for _ in range(10):
        avoid = []
        for _ in range(3):
            k = r.randint(0, 12)
            avoid.append(set(range(2**k, 2 ** (k + 1))))
        rep = refine_avoid(D, avoid)
        if rep.exhausted_at is None:
            assert rep.all_verified
