"""Katětov-order witness testing on finite tables.

A map f: [0, N) -> [0, M) "passes" against a probe family when every probe
the source oracle judges small has a preimage the target oracle also judges
small.  A pass is always relative to the probes that were tried.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from math import comb
from typing import Iterable

import numpy as np

from .errors import InvalidInput, InvalidProbe, SearchTooLarge
from .ideals import Judgement, OracleConfig, judge, recheck

DEFAULT_BUDGET = 1_000_000


@dataclass(frozen=True, eq=False)
class KatetovMap:
    table: np.ndarray
    codomain_size: int
    name: str = "table"

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.int64)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        if table.ndim != 1:
            raise InvalidInput("map table must be one-dimensional")
        if self.codomain_size < 1:
            raise InvalidInput("codomain size must be >= 1")
        if table.size and (table.min() < 0 or table.max() >= self.codomain_size):
            raise InvalidInput(f"map values must lie in [0, {self.codomain_size})")

    @classmethod
    def from_values(cls, values, codomain_size=None, name="table"):
        values = [int(v) for v in values]
        M = codomain_size if codomain_size is not None else max(values, default=0) + 1
        return cls(np.asarray(values, dtype=np.int64), M, name)

    @property
    def domain_size(self) -> int:
        return int(self.table.size)

    def __call__(self, x: int) -> int:
        return int(self.table[x])

    def preimage(self, A: Iterable[int]) -> list[int]:
        A = np.asarray(sorted(set(int(a) for a in A)), dtype=np.int64)
        return np.flatnonzero(np.isin(self.table, A)).tolist()

    def fibers(self) -> dict[int, np.ndarray]:
        order = np.argsort(self.table, kind="stable")
        vals, starts = np.unique(self.table[order], return_index=True)
        parts = np.split(order, starts[1:])
        return {int(v): p for v, p in zip(vals, parts)}

    def to_json(self):
        return self.table.tolist()


def coloring(name: str, domain: int) -> KatetovMap:
    """Built-in colorings on [0, domain); index 0 is mapped to 0 by convention.

    Names: ``log2``, ``identity``, ``constant``, ``constant-C``, ``mod-N``, ``block-N``.
    """
    x = np.arange(domain, dtype=np.int64)
    if name == "log2":
        table = _log2_floor(x)
    elif name == "identity":
        table = x.copy()
    elif name == "constant" or name.startswith("constant-"):
        c = int(name.split("-", 1)[1]) if "-" in name else 0
        table = np.full(domain, c, dtype=np.int64)
    elif name.startswith("mod-"):
        table = x % int(name[4:])
    elif name.startswith("block-"):
        table = x // int(name[6:])
    else:
        raise InvalidInput(f"unknown coloring {name!r}")
    M = int(table.max()) + 1 if domain else 1
    return KatetovMap(table, M, name)


def _log2_floor(v: np.ndarray) -> np.ndarray:
    # integer comparisons only; floats would misround near powers of two
    out = np.zeros_like(v)
    for k in range(1, 63):
        out[v >= (np.int64(1) << k)] = k
    return out


def load_coloring(path: str) -> KatetovMap:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        return KatetovMap.from_values(data["table"], data.get("codomain"), data.get("name", path))
    return KatetovMap.from_values(data, name=path)


@dataclass
class KatetovReport:
    passed: bool
    source: OracleConfig
    target: OracleConfig
    probes_total: int
    probes_source_small: int
    counterexample: dict | None = None
    probe_family: str = "explicit"
    _judgement: Judgement | None = field(default=None, repr=False)

    def to_json(self):
        return {"passed": self.passed, "relative_to": self.probe_family,
                "source": self.source.to_json(), "target": self.target.to_json(),
                "probes_total": self.probes_total,
                "probes_source_small": self.probes_source_small,
                "counterexample": self.counterexample}


def _check_probes(probes, M):
    out = []
    for A in probes:
        A = sorted(set(int(a) for a in A))
        if A and (A[0] < 0 or A[-1] >= M):
            raise InvalidProbe(f"probe {A} is not inside the codomain [0, {M})")
        out.append(A)
    return out


def verify_witness(f: KatetovMap, source: OracleConfig, target: OracleConfig,
                   probes, probe_family: str = "explicit",
                   _source_cache=None, _target_cache=None) -> KatetovReport:
    probes = _check_probes(probes, f.codomain_size)
    small = 0
    for idx, A in enumerate(probes):
        key = tuple(A)
        if _source_cache is not None and key in _source_cache:
            src = _source_cache[key]
        else:
            src = judge(A, source)
            if _source_cache is not None:
                _source_cache[key] = src
        if src.positive:
            continue
        small += 1
        pre = f.preimage(A)
        pkey = tuple(pre)
        if _target_cache is not None and pkey in _target_cache:
            tgt = _target_cache[pkey]
        else:
            tgt = judge(pre, target)
            if _target_cache is not None:
                _target_cache[pkey] = tgt
        if tgt.positive:
            ce = {"probe_index": idx, "probe": A, "preimage_size": len(pre),
                  "source_judgement": src.to_json(), "target_judgement": tgt.to_json()}
            return KatetovReport(False, source, target, len(probes), small, ce,
                                 probe_family, tgt)
    return KatetovReport(True, source, target, len(probes), small, None, probe_family)


def recheck_counterexample(f: KatetovMap, report: KatetovReport) -> bool:
    """The probe is source-small and its preimage's positivity evidence re-verifies."""
    if report.counterexample is None or report._judgement is None:
        return False
    probe = report.counterexample["probe"]
    if judge(probe, report.source).positive:
        return False
    return recheck(f.preimage(probe), report._judgement)


def map_family_size(N: int, M: int, family: str) -> int:
    if family == "all":
        return M**N
    if family == "monotone":
        return comb(N + M - 1, N)
    raise InvalidInput(f"unknown map family {family!r}")


def search_witness(N: int, M: int, source: OracleConfig, target: OracleConfig,
                   probes, family: str = "all", budget: int = DEFAULT_BUDGET,
                   probe_family: str = "explicit") -> KatetovMap | None:
    """First map in canonical order (lexicographic tables) that passes all probes."""
    size = map_family_size(N, M, family)
    if size > budget:
        raise SearchTooLarge(f"{family} family has {size} maps, budget is {budget}")
    probes = _check_probes(probes, M)
    tables = product(range(M), repeat=N) if family == "all" \
        else combinations_with_replacement(range(M), N)
    src_cache: dict = {}
    tgt_cache: dict = {}
    for table in tables:
        f = KatetovMap(np.asarray(table, dtype=np.int64), M)
        rep = verify_witness(f, source, target, probes, probe_family, src_cache, tgt_cache)
        if rep.passed:
            return f
    return None


def all_subsets(M: int):
    for mask in range(1 << M):
        yield [i for i in range(M) if mask >> i & 1]
