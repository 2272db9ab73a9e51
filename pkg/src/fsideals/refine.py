"""Finite FS-refinements: diagonal tail refinement through a nested chain, and
refinement that eventually avoids a family of Hindman-small sets.

Both builders are deterministic (least admissible choice at every step).
Running out of finite data is a normal outcome recorded as ``exhausted_at``.
Every ``verified`` flag in a report comes from :func:`check_report`, which
recomputes containments with the brute-force routines in :mod:`naive`.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import naive
from .errors import InvalidChain, InvalidInput, SearchTooLarge
from .ground import (GroundSet, as_ground, fs_set, greedy_very_sparse,
                     is_very_sparse, support_masks)
from .search import DEPTH_CAP, fs_witness

REFINE_CAP = 16


@dataclass(frozen=True)
class TargetCheck:
    n: int
    cutoff: int
    verified: bool

    def to_json(self):
        return {"n": self.n, "cutoff": self.cutoff, "verified": self.verified}


@dataclass(frozen=True)
class RefinementReport:
    kind: str  # "fs1" | "avoid"
    base: GroundSet  # the set whose FS must contain FS(output)
    output: GroundSet
    targets: tuple  # FS(output ∖ cutoff) must sit inside (fs1) / avoid (avoid) these
    per_target: tuple[TargetCheck, ...]
    containment_verified: bool
    exhausted_at: int | None = None
    stages: tuple = field(default=())

    @property
    def all_verified(self) -> bool:
        return self.containment_verified and all(t.verified for t in self.per_target)

    def to_json(self):
        return {"kind": self.kind, "base": self.base.to_json(),
                "output": self.output.to_json(),
                "containment_verified": self.containment_verified,
                "per_target": [t.to_json() for t in self.per_target],
                "exhausted_at": self.exhausted_at, "stages": list(self.stages)}


def _fs(D) -> set[int]:
    return fs_set(D).as_set()


def _target_ok(kind, tail, target) -> bool:
    """Independent check for one target: containment (fs1) or disjointness (avoid)."""
    sums = naive.fs(tail)
    if kind == "fs1":
        return sums <= naive.fs(target)
    return sums.isdisjoint(target)


def check_report(report: RefinementReport) -> RefinementReport:
    """Recompute every flag by brute force; returns a copy with fresh flags."""
    out = report.output.elements
    containment = naive.fs(out) <= naive.fs(report.base.elements)
    checks = tuple(
        TargetCheck(t.n, t.cutoff,
                    _target_ok(report.kind, out[t.cutoff:], _target_elements(report, t.n)))
        for t in report.per_target)
    return replace(report, per_target=checks, containment_verified=containment)


def _target_elements(report, n):
    tgt = report.targets[n]
    return tgt.elements if isinstance(tgt, GroundSet) else tgt


def _least_cutoff(E: GroundSet, ok) -> int:
    for k in range(len(E) + 1):
        if ok(E.drop_first(k)):
            return k
    raise AssertionError("unreachable: the empty tail always passes")


def refine_fs1(D0, chain, target_len: int, cap: int = REFINE_CAP) -> RefinementReport:
    """Pick e_0 < e_1 < ... with e_n in FS(D_n) and pairwise disjoint D0-supports.

    ``chain[n]`` is D_n; FS(D0) ⊇ FS(chain[0]) ⊇ FS(chain[1]) ⊇ ... must hold.
    For each n the report gives the least k with FS(E minus its first k
    elements) ⊆ FS(D_n).
    """
    D0 = as_ground(D0)
    chain = [as_ground(C) for C in chain]
    if not is_very_sparse(D0):
        raise InvalidInput(f"D0 = {D0.elements} is not very sparse")
    if target_len < 0 or target_len > min(len(chain), cap):
        raise InvalidInput(f"target_len {target_len} exceeds chain length/cap")
    prev = _fs(D0)
    fs_chain = []
    for i, C in enumerate(chain):
        cur = _fs(C)
        if not cur <= prev:
            raise InvalidChain(f"FS(D_{i}) is not contained in the previous set's FS")
        fs_chain.append(cur)
        prev = cur
    supp = support_masks(D0)

    picks: list[int] = []
    used = 0
    exhausted = None
    stages = []
    for n in range(target_len):
        pool = chain[n].elements if n == 0 else sorted(fs_chain[n])
        last = picks[-1] if picks else 0
        pick = next((x for x in pool if x > last and not supp[x] & used), None)
        if pick is None:
            exhausted = n
            break
        picks.append(pick)
        used |= supp[pick]
        stages.append({"n": n, "e": pick, "support": [D0[i] for i in range(len(D0))
                                                      if supp[pick] >> i & 1]})
    E = GroundSet(tuple(picks))
    per = tuple(TargetCheck(n, _least_cutoff(E, lambda T: _fs(T) <= fs_chain[n]), False)
                for n in range(target_len))
    report = RefinementReport("fs1", D0, E, tuple(chain), per, False, exhausted, tuple(stages))
    return check_report(report)


def default_depths(target_len: int, stages: int) -> list[int]:
    """k, k-1, ..., ending at target_len on the last avoided set."""
    return [max(1, min(DEPTH_CAP, target_len + stages - 1 - i)) for i in range(stages)]


def refine_avoid(D, avoid, target_len: int | None = None,
                 depths=None, node_budget: int | None = None) -> RefinementReport:
    """FS-refinement of D whose tails eventually miss every set in ``avoid``.

    Builds D_0, D_1, ... with FS(D_i) ⊆ FS(D_{i-1}) ∖ avoid[i] by witness
    search, runs :func:`refine_fs1` on the chain and drops the prefix needed
    for the first target.  A non-very-sparse D is first thinned with the
    greedy rule.  With ``node_budget``, a search that runs out of budget
    counts as a failure at that depth and is noted in the stage record.
    """
    D = as_ground(D)
    avoid = [A if isinstance(A, frozenset) else frozenset(int(a) for a in A) for A in avoid]
    base = D if is_very_sparse(D) else greedy_very_sparse(D.elements, None)
    if target_len is None:
        target_len = len(base)
    target_len = min(target_len, REFINE_CAP)
    if depths is None:
        depths = default_depths(target_len, len(avoid))
    stages: list[dict] = [{"stage": "base", "ground": base.to_json(),
                           "thinned": base != D}]

    chain: list[GroundSet] = []
    prev = base
    for i, A in enumerate(avoid):
        host = _fs(prev) - A
        if len(host) == len(fs_set(prev)):
            chain.append(prev)
            stages.append({"stage": i, "ground": prev.to_json(), "search": False})
            continue
        depth = max(1, min(depths[i], len(prev)))
        w = None
        budget_hits = []
        # fall back to shallower witnesses before declaring the stage exhausted
        while host and w is None and depth >= 1:
            try:
                w = fs_witness(sorted(host), depth, node_budget=node_budget)
            except SearchTooLarge:
                budget_hits.append(depth)
            depth -= w is None
        if w is None:
            stages.append({"stage": i, "ground": None, "depth": depth, "search": True,
                           "budget_hits": budget_hits})
            report = RefinementReport("avoid", D, GroundSet(()), tuple(avoid),
                                      (), False, i, tuple(stages))
            return check_report(report)
        prev = w.ground
        chain.append(prev)
        stages.append({"stage": i, "ground": prev.to_json(), "depth": depth, "search": True,
                       "budget_hits": budget_hits})

    if not chain:
        chain = [base]
    # past the last avoided set there is nothing left to dodge
    chain += [chain[-1]] * max(0, target_len - len(chain))
    fs1 = refine_fs1(base, chain, min(target_len, len(chain)))
    stages.append({"stage": "fs1", "output": fs1.output.to_json(),
                   "exhausted_at": fs1.exhausted_at})
    k0 = fs1.per_target[0].cutoff if fs1.per_target else 0
    out = fs1.output.drop_first(k0)
    per = tuple(TargetCheck(n, _least_cutoff(out, lambda T: _fs(T).isdisjoint(A)), False)
                for n, A in enumerate(avoid))
    report = RefinementReport("avoid", D, out, tuple(avoid), per, False,
                              fs1.exhausted_at, tuple(stages))
    return check_report(report)
