"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""
import random
import statistics
import time
from dataclasses import replace
from itertools import combinations

import numpy as np
import pytest

from fsideals import naive
from fsideals.ground import (GroundSet, decompositions, fs_set, greedy_very_sparse, is_sparse,
                             is_very_sparse, satisfies_growth_rule, tail_shift)
from fsideals.ideals import OracleConfig, summable_weight
from fsideals.katetov import KatetovMap, coloring, recheck_counterexample, verify_witness
from fsideals.partition import in_cell, partition_index
from fsideals.refine import check_report, refine_avoid
from fsideals.search import fs_witness
from fsideals.separation import (Schedule, build_separation, check_fibers, certificate_bound,
                                 stage_bound, verify_trace)

from conftest import growth_stream


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    return emit


def _oracles_agree(D):
    G = GroundSet(tuple(D))
    if set(fs_set(G).values) != naive.fs(D):
        return False
    nd = naive.decompositions(D)
    got = decompositions(G).entries
    if got.keys() != nd.keys() or any(list(got[x]) != nd[x] for x in nd):
        return False
    return is_sparse(G) == naive.is_sparse(D) and is_very_sparse(G) == naive.is_very_sparse(D)


def test_c1_oracle_equivalence(verdict):
    start = time.perf_counter()
    exhaustive = [D for k in range(6) for D in combinations(range(1, 31), k)]
    bad = [D for D in exhaustive if not _oracles_agree(D)]
    r = random.Random(1)
    randoms = []
    for i in range(1000):
        n = r.randint(1, 12)
        # alternate dense draws (mostly not sparse) with growth-rule draws (very sparse)
        randoms.append(sorted(r.sample(range(1, 2001), n)) if i % 2 else growth_stream(r, n))
    bad += [D for D in randoms if not _oracles_agree(D)]
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    verdict(1, ok, f"{len(exhaustive)} exhaustive + 1000 random sets, "
                   f"{len(bad)} mismatches, {elapsed:.1f}s (limit 60s)")
    assert not bad, bad[:5]
    assert elapsed < 60


def _random_stream(r):
    x = r.randint(1, 50)
    while True:
        yield x
        x += r.randint(1, max(1, x // 2))


def test_c2_greedy_soundness(verdict):
    passed, slowest = 0, 0.0
    for seed in range(100):
        r = random.Random(seed)
        t = time.perf_counter()
        D = greedy_very_sparse(_random_stream(r), 10)
        ok = satisfies_growth_rule(D) and naive.is_very_sparse(D.elements)
        # growth rule restated from scratch
        ok &= all(D[n] > 2 * sum(D.elements[:n]) for n in range(len(D)))
        dt = time.perf_counter() - t
        slowest = max(slowest, dt)
        passed += ok and dt < 1
    verdict(2, passed == 100, f"{passed}/100 streams, slowest {slowest * 1000:.0f} ms (limit 1 s)")
    assert passed == 100


def test_c3_partition_exactness(verdict):
    xs = np.arange(1, 2**20 + 1, dtype=np.int64)
    hits = np.zeros_like(xs)
    cell = np.full_like(xs, -1)
    for k in range(21):
        # the defining form n * 2^(k+1) + 2^k with n >= 0
        member = (xs >= 2**k) & ((xs - 2**k) % 2 ** (k + 1) == 0)
        hits += member
        cell[member] = k
    lowbit = np.array([partition_index(int(x)) for x in xs])
    bad = int(np.count_nonzero(hits != 1) + np.count_nonzero(cell != lowbit))
    # spot-check the scalar form as well
    bad += sum(not in_cell(x, partition_index(x)) for x in range(1, 5000))
    verdict(3, bad == 0, f"2^20 values, {bad} disagreements")
    assert bad == 0


def test_c4_refinement_verification(verdict):
    completed = verified = mutations = caught = 0
    for seed in range(50):
        r = random.Random(seed)
        D = greedy_very_sparse(_geometric(r), 12)
        sums = fs_set(D).as_set()
        blocks = r.sample(range(D.total.bit_length()), 3)
        # dyadic-block fibers [2^j, 2^(j+1)), restricted to FS(D) where they can matter
        avoid = [{s for s in sums if s.bit_length() - 1 == j} for j in blocks]
        rep = refine_avoid(D, avoid, target_len=5)
        if rep.exhausted_at is not None:
            continue
        completed += 1
        fresh = check_report(rep)
        verified += fresh.all_verified
        # the base is very sparse, so 2x never lies in FS(base)
        for i in range(len(rep.output)):
            els = list(rep.output.elements)
            els[i] *= 2
            if len(set(els)) < len(els):
                continue
            mutations += 1
            caught += not check_report(replace(rep, output=GroundSet.of(els))).all_verified
    ok = completed > 0 and verified == completed and caught == mutations
    verdict(4, ok, f"{completed}/50 completed, {verified} fully verified, "
                   f"{caught}/{mutations} mutations flagged")
    assert ok


def _geometric(r):
    x = r.randint(1, 20)
    while True:
        yield x
        x += r.randint(1, x)


def test_c5_tail_minimality(verdict):
    cases = bad = 0
    for base in [(1, 3, 9, 27, 81, 243), (2, 5, 15, 45, 135, 405)]:
        assert naive.is_very_sparse(base)
        for n in range(1, 7):
            for D in combinations(base, n):
                fsD = naive.fs(D)
                for m in range(1, 4):
                    for E in combinations(sorted(fsD), m):
                        if not naive.fs(E) <= fsD:
                            continue
                        for d in D:
                            cases += 1
                            e = tail_shift(D, E, d).e
                            target = naive.fs(naive.drop_below(D, d))
                            ok = naive.fs(naive.drop_below(E, e)) <= target
                            if e > 0:
                                ok &= not naive.fs(naive.drop_below(E, e - 1)) <= target
                            bad += not ok
    verdict(5, bad == 0, f"{cases} (D, E, d) cases, {bad} failures")
    assert bad == 0


def test_c6_separation_certificate(verdict):
    f = coloring("log2", 2**20 + 1)
    start = time.perf_counter()
    trace = build_separation(f, Schedule.default(5), stages=4)
    elapsed = time.perf_counter() - start
    X = trace.x
    image = {f(s) for s in naive.fs(X)}
    weight = summable_weight(image)
    bound = certificate_bound(f(X[0]), trace.schedule, 4)
    stagewise = all(
        summable_weight({f(s) for s in naive.fs(X[:n + 1])} - {f(s) for s in naive.fs(X[:n])})
        <= stage_bound(n, trace.schedule) for n in range(1, len(X)))
    check = verify_trace(trace, f)
    ok = trace.complete and weight <= bound and check.ok and stagewise and elapsed < 300
    verdict(6, ok, f"complete={trace.complete} (exhausted_at={trace.exhausted_at}), |X|={len(X)}, "
                   f"weight={float(weight):.4f} <= bound={float(bound):.4f}: {weight <= bound}, "
                   f"verify={check.ok}, {elapsed:.1f}s")
    assert trace.complete, "run exhausted before stage 4; see the decisions ledger"
    assert weight <= bound and check.ok and stagewise and elapsed < 300


def test_c7_fiber_short_circuit(verdict):
    f = coloring("mod-5", 201)
    rep = check_fibers(f, 3)
    ok = rep.positive is not None
    if ok:
        v, w = rep.positive
        sums = naive.fs(w.ground.elements)
        ok = len(w.ground) == 3 and all(1 <= s <= 200 and f(s) == v for s in sums)
    verdict(7, ok, f"positive fiber {rep.positive and rep.positive[0]}, witness "
                   f"{rep.positive and rep.positive[1].ground.elements}")
    assert ok


def test_c8_katetov_sanity(verdict):
    M = 32
    r = random.Random(8)
    probes = [sorted(r.sample(range(M), r.randint(0, M))) for _ in range(200)]
    ident = coloring("identity", M)
    passes = {k: verify_witness(ident, OracleConfig.folkman(k), OracleConfig.hindman(k),
                                probes).passed for k in (2, 3)}
    const = KatetovMap.from_values([0] * 64, M)
    rep = verify_witness(const, OracleConfig.summable(), OracleConfig.hindman(2),
                         [[0], list(range(M))])
    ce_ok = not rep.passed and recheck_counterexample(const, rep)
    ok = all(passes.values()) and ce_ok
    verdict(8, ok, f"identity passes {passes}; constant-map counterexample "
                   f"{rep.counterexample and rep.counterexample['probe']} re-verifies: {ce_ok}")
    assert ok


def test_c9_performance(verdict):
    D = GroundSet(tuple(3**i for i in range(20)))
    times = []
    for _ in range(7):
        t = time.perf_counter()
        sums = fs_set(D)
        times.append(time.perf_counter() - t)
    median = statistics.median(times)
    r = random.Random(9)
    hosts = [r.sample(range(1, 400), 200), r.sample(range(1, 2000), 200),
             sorted(naive.fs((1, 3, 9, 27, 81, 243, 729, 2187)))[:200]]
    worst = 0.0
    for A in hosts:
        t = time.perf_counter()
        fs_witness(A, 4)
        worst = max(worst, time.perf_counter() - t)
    ok = len(sums.values) == 2**20 - 1 and median < 0.2 and worst < 2
    verdict(9, ok, f"fs_set |D|=20 median {median * 1000:.0f} ms (limit 200), "
                   f"fs_witness depth 4 worst {worst * 1000:.0f} ms (limit 2000)")
    assert ok
