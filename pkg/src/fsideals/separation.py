"""Finite separation engine: for a coloring f whose fibers are Hindman-small,
build X = {x_0 < x_1 < ...} such that f[FS(X)] has small, certified summable
weight.

The construction runs in stages.  Stage n picks x_n from a ground D_n whose
finite sums stay above the schedule value a_n under f, after labelling every
y in FS(x_0, ..., x_{n-1}) with g_n(y):

* g_n(y) = 0: f is constant on y + FS(D_n);
* g_n(y) = 1: f stays above a_n on y + FS(D_n).

Labels forced to 0 are inherited from stage n-1; the remaining points t are
handled in ascending order, first by a constant-on-translate search and,
failing that, by an avoidance search.  At finite depth both searches can
fail, in which case the trace stops with ``exhausted_at`` set.

:func:`verify_trace` recomputes everything from X and f alone.
"""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import naive
from .errors import FsIdealsError
from .ground import GroundSet, fs_set, greedy_very_sparse, tail_shift
from .ideals import Judgement, OracleConfig, fraction_json, judge
from .katetov import KatetovMap, coloring
from .refine import _least_cutoff, refine_avoid
from .search import DEPTH_CAP, avoid_witness, translate_constant_witness

DEFAULT_STAGES = 4
MAX_STAGES = 6
DEFAULT_FIBER_DEPTH = 2
# per witness search; a spent budget ends the run as exhausted, never as "none"
NODE_BUDGET = 100_000


@dataclass(frozen=True)
class Schedule:
    a: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(v) for v in self.a)
        object.__setattr__(self, "a", a)
        if any(v < 0 for v in a) or any(p >= q for p, q in zip(a, a[1:])):
            raise FsIdealsError("schedule must be a strictly increasing sequence of naturals")

    @classmethod
    def default(cls, length: int) -> "Schedule":
        """a_n = 4^(n+2) - 1, so that sum 2^(n+1)/(a_n+1) = 1/4 in the limit."""
        return cls(tuple(4 ** (n + 2) - 1 for n in range(length)))

    @property
    def tail_bound(self) -> Fraction:
        return sum((Fraction(2 ** (n + 1), a + 1) for n, a in enumerate(self.a)), Fraction(0))

    def to_json(self):
        return {"a": list(self.a), "tail_bound": fraction_json(self.tail_bound)}


@dataclass
class FiberReport:
    depth: int
    judgements: dict  # value -> Judgement, for fibers big enough to need a search
    trivially_small: int  # fibers with fewer than `depth` positive elements
    positive: tuple | None = None  # (value, FsWitness) of the first positive fiber

    def judgement(self, v: int) -> Judgement:
        return self.judgements.get(v) or Judgement("small", None, self.depth, "hindman")

    def to_json(self):
        return {"depth": self.depth, "trivially_small": self.trivially_small,
                "positive": None if self.positive is None else
                {"value": self.positive[0], "witness": self.positive[1].to_json()},
                "judged": {str(v): j.to_json() for v, j in self.judgements.items()}}


def check_fibers(f: KatetovMap, depth: int = DEFAULT_FIBER_DEPTH) -> FiberReport:
    """Judge every fiber f^{-1}[{v}] with the Hindman oracle at ``depth``."""
    cfg = OracleConfig.hindman(depth)
    judged = {}
    trivial = 0
    positive = None
    for v, fiber in f.fibers().items():
        fiber = fiber[fiber > 0]
        # FS of a size-k ground set has at least k elements
        if fiber.size < depth:
            trivial += 1
            continue
        j = judge(fiber.tolist(), cfg)
        judged[v] = j
        if j.positive and positive is None:
            positive = (v, j.evidence)
    return FiberReport(depth, judged, trivial, positive)


@dataclass
class SeparationTrace:
    kind: str  # "separation" | "fiber"
    coloring: dict
    schedule: Schedule
    stages: int
    x: list = field(default_factory=list)
    g: list = field(default_factory=list)  # g[n]: {y: label} on FS(x_0..x_{n-1})
    grounds: list = field(default_factory=list)  # D_n
    steps: list = field(default_factory=list)  # per stage: translate points and cases
    preprocessing: dict = field(default_factory=dict)
    certificate: dict = field(default_factory=dict)
    exhausted_at: int | None = None

    @property
    def complete(self) -> bool:
        return self.kind == "fiber" or (self.exhausted_at is None and len(self.x) == self.stages)

    def to_json(self):
        # deep copy: callers may edit the dict without touching the trace
        return copy.deepcopy({"kind": self.kind, "coloring": self.coloring,
                "schedule": self.schedule.to_json(), "stages": self.stages,
                "complete": self.complete, "exhausted_at": self.exhausted_at,
                "x": self.x,
                "g": [{str(y): v for y, v in sorted(gn.items())} for gn in self.g],
                "grounds": self.grounds, "steps": self.steps,
                "preprocessing": self.preprocessing, "certificate": self.certificate})

    @classmethod
    def from_json(cls, data) -> "SeparationTrace":
        data = copy.deepcopy(data)
        return cls(kind=data["kind"], coloring=data["coloring"],
                   schedule=Schedule(tuple(data["schedule"]["a"])), stages=data["stages"],
                   x=list(data["x"]),
                   g=[{int(y): v for y, v in gn.items()} for gn in data["g"]],
                   grounds=data["grounds"], steps=data["steps"],
                   preprocessing=data["preprocessing"], certificate=data["certificate"],
                   exhausted_at=data["exhausted_at"])


def _image_weight(values) -> Fraction:
    return sum((Fraction(1, v + 1) for v in set(values)), Fraction(0))


def certificate_bound(f_x0: int, schedule: Schedule, stages: int) -> Fraction:
    """1/(f(x_0)+1) + sum_{n=1}^{stages} 2^n/(a_{n-1}+1)."""
    return Fraction(1, f_x0 + 1) + sum(
        (Fraction(2**n, schedule.a[n - 1] + 1) for n in range(1, stages + 1)), Fraction(0))


def stage_bound(n: int, schedule: Schedule) -> Fraction:
    return Fraction(2**n, schedule.a[n - 1] + 1)


def _certificate(f, X, schedule, stages) -> dict:
    fs_prev: set[int] = set()
    seen: set[int] = set()
    increments = []
    for n, x in enumerate(X):
        fs_now = fs_prev | {x} | {y + x for y in fs_prev}
        image = {f(s) for s in fs_now}
        new = sorted(image - seen)
        inc = {"n": n, "new_values": new, "weight": fraction_json(_image_weight(new))}
        if n >= 1:
            inc["bound"] = fraction_json(stage_bound(n, schedule))
        increments.append(inc)
        seen |= image
        fs_prev = fs_now
    weight = _image_weight(seen)
    bound = certificate_bound(f(X[0]), schedule, stages) if X else None
    return {"image": sorted(seen), "weight": fraction_json(weight),
            "bound": None if bound is None else fraction_json(bound),
            "within_bound": bound is not None and weight <= bound,
            "increments": increments}


def _fiber_trace(f, fibers, schedule, stages, descriptor) -> SeparationTrace:
    v, w = fibers.positive
    X = list(w.ground.elements)
    weight = Fraction(1, v + 1)
    cert = {"image": [v], "weight": fraction_json(weight), "fiber_value": v,
            "fiber_depth": fibers.depth, "bound": None, "within_bound": True}
    return SeparationTrace("fiber", descriptor, schedule, stages, x=X, certificate=cert)


def _initial_ground(N: int) -> GroundSet:
    """Greedy very-sparse set from 1, 2, 3, ... with all finite sums below N."""
    D = greedy_very_sparse(range(1, N), None)
    els, total = [], 0
    for d in D.elements:
        if total + d >= N:
            break
        els.append(d)
        total += d
    return GroundSet(tuple(els))


def _preprocess(f, schedule, stages, ground_len, node_budget):
    """Very-sparse D with FS(D ∖ d_n) missing f^{-1}[{0..a_n}] for n <= stages."""
    N = f.domain_size
    D = _initial_ground(N)
    if ground_len is not None:
        D = GroundSet(D.elements[:ground_len])
    low = [frozenset(np.flatnonzero((f.table <= schedule.a[n]) & (np.arange(N) > 0)).tolist())
           for n in range(stages + 1)]
    info = {"initial_ground": D.to_json()}
    avoid = low
    # stage n of the engine only needs the elements from index n on, so the
    # chain depth can shrink with n
    depths = [max(1, min(DEPTH_CAP, stages + 1 - i)) for i in range(len(low))]
    rep = refine_avoid(D, avoid, depths=depths, node_budget=node_budget)
    # sets that swallow the whole remaining FS cannot be dodged; refine
    # against the prefix that can and let the rest force empty tails
    while not rep.output.elements and rep.exhausted_at:
        avoid = avoid[:rep.exhausted_at]
        rep = refine_avoid(D, avoid, depths=depths, node_budget=node_budget)
    info["refined_against"] = len(avoid)
    info["refine_exhausted_at"] = rep.exhausted_at
    Dp = rep.output
    info["refined"] = Dp.to_json()
    cutoffs = [_least_cutoff(Dp, lambda T, A=A: fs_set(T).as_set().isdisjoint(A)) for A in low]
    info["cutoffs"] = cutoffs
    # re-enumerate so that the n-th element sits at or past every earlier cutoff
    idx, need = [], 0
    for n in range(len(Dp)):
        need = max(need, cutoffs[n] if n < len(cutoffs) else 0)
        i = max(need, idx[-1] + 1 if idx else 0)
        if i >= len(Dp):
            break
        idx.append(i)
    D2 = GroundSet(tuple(Dp[i] for i in idx))
    info["ground"] = D2.to_json()
    return D2, low, info


def default_depths(stages: int) -> list[int]:
    return [max(1, min(DEPTH_CAP, stages - n + 1)) for n in range(1, stages)]


def build_separation(f: KatetovMap, schedule: Schedule | None = None,
                     stages: int = DEFAULT_STAGES, search_depths=None,
                     fiber_depth: int = DEFAULT_FIBER_DEPTH, ground_len: int | None = None,
                     descriptor: dict | None = None,
                     node_budget: int | None = NODE_BUDGET) -> SeparationTrace:
    if not 1 <= stages <= MAX_STAGES:
        raise FsIdealsError(f"stages must lie in [1, {MAX_STAGES}]")
    schedule = schedule or Schedule.default(stages + 1)
    if len(schedule.a) < stages + 1:
        raise FsIdealsError(f"schedule needs {stages + 1} entries")
    depths = list(search_depths or default_depths(stages))
    descriptor = descriptor or {"name": f.name, "domain": f.domain_size}

    fibers = check_fibers(f, fiber_depth)
    if fibers.positive is not None:
        return _fiber_trace(f, fibers, schedule, stages, descriptor)

    trace = SeparationTrace("separation", descriptor, schedule, stages)
    D, low, info = _preprocess(f, schedule, stages, ground_len, node_budget)
    info["fiber_depth"] = fiber_depth
    info["node_budget"] = node_budget
    info["search_depths"] = depths
    trace.preprocessing = info
    if not D.elements:
        trace.exhausted_at = 0
        return trace

    a = schedule.a
    X = [D[0]]
    g: list[dict] = [{}]
    trace.grounds.append(D.to_json())
    trace.steps.append({"n": 0, "x": X[0]})
    ground = D
    for n in range(1, stages):
        fs_before = naive.fs(X[:-1])  # FS(x_0..x_{n-2})
        prev_g = g[-1]
        forced = {y for y in fs_before if prev_g.get(y) == 0}
        forced |= {X[-1] + y for y in fs_before if prev_g.get(y) == 0}
        gn = {y: 0 for y in forced}
        ts = sorted(naive.fs(X) - forced)
        E = ground.drop_below(X[-1] + 1)
        depth = depths[n - 1] if n - 1 < len(depths) else 1
        step = {"n": n, "translates": ts, "forced_zero": sorted(forced), "cases": [],
                "E": [E.to_json()]}
        failed = False
        for t in ts:
            k = min(depth, len(E))
            if k < 1:
                failed = True
                break
            try:
                hit = translate_constant_witness(f, t, E, k, node_budget)
                if hit is not None:
                    C, c = hit
                    gn[t] = 0
                    step["cases"].append({"t": t, "case": "constant", "value": c,
                                          "depth": k, "C": C.to_json()})
                else:
                    C = avoid_witness(f, t, a[n], E, k, node_budget)
                    if C is None:
                        failed = True
                        step["cases"].append({"t": t, "case": "none", "depth": k})
                        break
                    gn[t] = 1
                    step["cases"].append({"t": t, "case": "avoid", "bound": a[n],
                                          "depth": k, "C": C.to_json()})
            except FsIdealsError as exc:
                failed = True
                step["cases"].append({"t": t, "case": "error", "error": str(exc)})
                break
            E = C
            step["E"].append(E.to_json())
        if not failed and n < len(D):
            shift = tail_shift(D, E, D[n])
            xn = next((y for y in E.elements if y >= shift.e), None)
            step["tail_shift"] = shift.to_json()
            failed = xn is None
        else:
            failed = True
        trace.steps.append(step)
        if failed:
            trace.exhausted_at = n
            break
        X.append(xn)
        g.append(gn)
        trace.grounds.append(E.to_json())
        step["x"] = xn
        ground = E

    trace.x = X
    trace.g = g
    trace.certificate = _certificate(f, X, schedule, stages)
    return trace


@dataclass
class TraceCheck:
    ok: bool
    discrepancies: list

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"ok": self.ok, "discrepancies": self.discrepancies}


def _frac(d) -> Fraction:
    return Fraction(int(d["numerator"]), int(d["denominator"]))


def verify_trace(trace: SeparationTrace, f: KatetovMap) -> TraceCheck:
    """Recompute the certificate from X and f alone and compare."""
    bad: list[str] = []
    X = list(trace.x)
    N = f.domain_size
    if not X:
        return TraceCheck(False, ["empty X"])
    if any(p >= q for p, q in zip(X, X[1:])):
        bad.append("x is not strictly increasing")
    fs_all = naive.fs(X)
    if max(fs_all) >= N:
        return TraceCheck(False, bad + [f"FS(X) leaves the domain [0, {N})"])
    cert = trace.certificate

    if trace.kind == "fiber":
        vals = {f(s) for s in fs_all}
        if vals != {cert["fiber_value"]}:
            bad.append(f"f is not constant on FS(X): values {sorted(vals)}")
        if _frac(cert["weight"]) != _image_weight(vals):
            bad.append("certificate weight does not match f[FS(X)]")
        return TraceCheck(not bad, bad)

    sched = trace.schedule
    a = sched.a
    seen: set[int] = set()
    recorded = cert.get("increments", [])
    for n in range(len(X)):
        fs_prev = naive.fs(X[:n])
        fs_now = naive.fs(X[:n + 1])
        image = {f(s) for s in fs_now}
        new = image - seen
        w = _image_weight(new)
        if n >= 1 and w > stage_bound(n, sched):
            bad.append(f"stage {n}: increment weight {w} exceeds {stage_bound(n, sched)}")
        if n >= len(recorded) or sorted(new) != recorded[n]["new_values"] \
                or _frac(recorded[n]["weight"]) != w:
            bad.append(f"stage {n}: recorded increment does not match recomputation")
        if n >= 1 and n < len(trace.g):
            bad += _check_labels(n, X, trace.g, f, a, fs_prev)
        seen |= image
    weight = _image_weight(seen)
    bound = certificate_bound(f(X[0]), sched, trace.stages)
    if _frac(cert["weight"]) != weight:
        bad.append(f"certificate weight {cert['weight']['float']} != recomputed {float(weight)}")
    if cert.get("bound") is None or _frac(cert["bound"]) != bound:
        bad.append("certificate bound does not match the schedule")
    if weight > bound:
        bad.append(f"weight {weight} exceeds bound {bound}")
    return TraceCheck(not bad, bad)


def _check_labels(n, X, g, f, a, fs_prev) -> list[str]:
    """The value f(y + x_n) must match what g_n(y) promises."""
    bad = []
    gn, gp = g[n], g[n - 1]
    xn, xp = X[n], X[n - 1]
    fs_pp = naive.fs(X[:n - 1])
    seen_before = {f(s) for s in fs_prev}
    for y in sorted(fs_prev):
        label = gn.get(y)
        if label is None:
            bad.append(f"stage {n}: g_{n}({y}) undefined")
            continue
        v = f(y + xn)
        if label == 1:
            if v <= a[n]:
                bad.append(f"stage {n}: g=1 at {y} but f(y+x_n) = {v} <= a_n = {a[n]}")
            continue
        old = gp.get(y) == 0 or (y - xp in fs_pp and gp.get(y - xp) == 0)
        if old and v not in seen_before:
            bad.append(f"stage {n}: inherited constant at {y} is a new value {v}")
        if not old and v <= a[n - 1]:
            bad.append(f"stage {n}: new constant at {y} is {v} <= a_(n-1) = {a[n - 1]}")
    return bad


def trace_coloring(trace: SeparationTrace) -> KatetovMap:
    desc = trace.coloring
    if "table" in desc:
        return KatetovMap.from_values(desc["table"], desc.get("codomain"))
    return coloring(desc["name"], desc["domain"])


def load_trace(path: str) -> SeparationTrace:
    with open(path) as fh:
        return SeparationTrace.from_json(json.load(fh))
