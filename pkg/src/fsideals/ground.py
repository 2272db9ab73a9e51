"""Finite-sums algebra over finite ground sets.

A ground set is a strictly increasing tuple of positive integers.  FS(D) is
the set of sums of nonempty subsets of D (distinct elements, no repetition).
Small sets go through plain Python; from ``NUMPY_THRESHOLD`` elements on the
subset sums are built with numpy by repeated doubling.
"""
from __future__ import annotations

import os
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import (ArithmeticOverflow, EnumerationTooLarge,
                     InsufficientSource, InvalidInput)

INT64_MAX = 2**63 - 1
FS_CAP = int(os.environ.get("FSIDEALS_FS_CAP", 24))
VERY_SPARSE_CAP = int(os.environ.get("FSIDEALS_VERY_SPARSE_CAP", 16))
NUMPY_THRESHOLD = 11


@dataclass(frozen=True)
class GroundSet:
    elements: tuple[int, ...]

    def __post_init__(self):
        els = tuple(int(x) for x in self.elements)
        object.__setattr__(self, "elements", els)
        if any(x < 1 for x in els):
            raise InvalidInput(f"ground set elements must be >= 1: {els}")
        if any(a >= b for a, b in zip(els, els[1:])):
            raise InvalidInput(f"ground set must be strictly increasing: {els}")
        if sum(els) > INT64_MAX:
            raise ArithmeticOverflow("sum of ground set exceeds 64-bit range")

    @classmethod
    def of(cls, values: Iterable[int]) -> "GroundSet":
        """Build from any iterable; sorts and rejects duplicates."""
        vals = [int(v) for v in values]
        if len(set(vals)) != len(vals):
            raise InvalidInput(f"duplicate elements in {sorted(vals)}")
        return cls(tuple(sorted(vals)))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    @property
    def total(self) -> int:
        return sum(self.elements)

    def drop_below(self, e: int) -> "GroundSet":
        """D ∖ e, reading e as {0, ..., e-1}."""
        return GroundSet(tuple(x for x in self.elements if x >= e))

    def drop_first(self, k: int) -> "GroundSet":
        return GroundSet(self.elements[k:])

    def to_json(self):
        return list(self.elements)


def as_ground(D) -> GroundSet:
    return D if isinstance(D, GroundSet) else GroundSet.of(D)


@dataclass(frozen=True)
class SumSet:
    values: tuple[int, ...]
    origin: GroundSet

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __contains__(self, x):
        i = bisect_left(self.values, x)
        return i < len(self.values) and self.values[i] == x

    def as_set(self) -> set[int]:
        return set(self.values)

    def to_json(self):
        return list(self.values)


@dataclass(frozen=True)
class DecompositionTable:
    entries: dict  # x -> tuple of subsets (each a sorted tuple), lex sorted
    origin: GroundSet

    def to_json(self):
        return {str(x): [list(F) for F in Fs] for x, Fs in sorted(self.entries.items())}


def _check_cap(D: GroundSet, cap: int):
    if len(D) > cap:
        raise EnumerationTooLarge(f"|D| = {len(D)} exceeds enumeration cap {cap}")


def subset_sums(D: GroundSet) -> np.ndarray:
    """Sums of all 2^|D| subsets, indexed by bitmask (bit i <-> D[i]).

    Index 0 is the empty sum.  The total was range-checked when D was built,
    so int64 cannot wrap.
    """
    sums = np.zeros(1, dtype=np.int64)
    for d in D.elements:
        sums = np.concatenate((sums, sums + d))
    return sums


def _py_subset_sums(els) -> list[int]:
    sums = [0]
    for d in els:
        sums += [s + d for s in sums]
    return sums


def fs_set(D, cap: int = None) -> SumSet:
    D = as_ground(D)
    _check_cap(D, FS_CAP if cap is None else cap)
    if not D.elements:
        return SumSet((), D)
    if len(D) < NUMPY_THRESHOLD:
        values = tuple(sorted(set(_py_subset_sums(D.elements)[1:])))
    else:
        values = tuple(np.unique(subset_sums(D)[1:]).tolist())
    return SumSet(values, D)


def decompositions(D, cap: int = None) -> DecompositionTable:
    D = as_ground(D)
    _check_cap(D, FS_CAP if cap is None else cap)
    els = D.elements
    sums = _py_subset_sums(els) if len(D) < NUMPY_THRESHOLD else subset_sums(D).tolist()
    # same doubling order as the sums, so subsets[mask] matches sums[mask]
    subsets = [()]
    for d in els:
        subsets += [F + (d,) for F in subsets]
    table: dict[int, list] = {}
    for x, F in zip(sums[1:], subsets[1:]):
        table.setdefault(x, []).append(F)
    return DecompositionTable({x: tuple(sorted(Fs)) for x, Fs in sorted(table.items())}, D)


def support_masks(D, cap: int = None) -> dict[int, int]:
    """Map each x in FS(D) to the bitmask of its decomposition.

    D must be sparse; raises InvalidInput otherwise.
    """
    D = as_ground(D)
    _check_cap(D, FS_CAP if cap is None else cap)
    sums = _py_subset_sums(D.elements) if len(D) < NUMPY_THRESHOLD else subset_sums(D).tolist()
    out: dict[int, int] = {}
    for mask in range(1, len(sums)):
        if sums[mask] in out:
            raise InvalidInput(f"{D.elements} is not sparse: {sums[mask]} has two decompositions")
        out[sums[mask]] = mask
    return out


def is_sparse(D, cap: int = None) -> bool:
    D = as_ground(D)
    _check_cap(D, FS_CAP if cap is None else cap)
    if len(D) < NUMPY_THRESHOLD:
        sums = _py_subset_sums(D.elements)
        return len(set(sums)) == len(sums)
    sums = subset_sums(D)
    return len(np.unique(sums)) == len(sums)


def _doubled_sums(els):
    """Sums c·D over c in {0,1,2}^n paired with "some coordinate is 2".

    c·D with a 2 somewhere is exactly ΣF + ΣF' for intersecting F, F'.
    """
    sums = np.zeros(1, dtype=np.int64)
    two = np.zeros(1, dtype=bool)
    for d in els:
        sums = np.concatenate((sums, sums + d, sums + 2 * d))
        two = np.concatenate((two, two, np.ones_like(two)))
    return sums, two


def is_very_sparse(D, cap: int = None) -> bool:
    D = as_ground(D)
    _check_cap(D, VERY_SPARSE_CAP if cap is None else cap)
    if not D.elements:
        return True
    if not is_sparse(D, cap=FS_CAP):
        return False
    if len(D) <= 7:
        fs_vals = set(_py_subset_sums(D.elements))
        sums, two = [0], [False]
        for d in D.elements:
            sums = sums + [s + d for s in sums] + [s + 2 * d for s in sums]
            two = two + two + [True] * len(two)
        return not any(t and s in fs_vals for s, t in zip(sums, two))
    fs_sorted = np.asarray(fs_set(D).values, dtype=np.int64)
    if 2 * D.total > INT64_MAX:
        raise ArithmeticOverflow("doubled sums exceed 64-bit range")
    # meet in the middle: left and right halves of the {0,1,2} vectors
    half = len(D) // 2
    lsum, ltwo = _doubled_sums(D.elements[:half])
    rsum, rtwo = _doubled_sums(D.elements[half:])
    chunk = max(1, 2_000_000 // len(rsum))
    for lo in range(0, len(lsum), chunk):
        tot = lsum[lo:lo + chunk, None] + rsum[None, :]
        mask = ltwo[lo:lo + chunk, None] | rtwo[None, :]
        cand = tot[mask]
        idx = np.searchsorted(fs_sorted, cand)
        idx[idx == len(fs_sorted)] = 0
        if np.any(fs_sorted[idx] == cand):
            return False
    return True


def satisfies_growth_rule(D) -> bool:
    """d_n > 2 * sum(d_i for i < n) at every position."""
    total = 0
    for d in as_ground(D).elements:
        if d <= 2 * total:
            return False
        total += d
    return True


def greedy_very_sparse(source: Iterable[int], length: int | None) -> GroundSet:
    """Scan ``source`` in order, keeping each value exceeding twice the kept total.

    With ``length=None`` the whole (finite) source is consumed and every
    admissible value kept.
    """
    if length is not None and length < 1:
        raise InvalidInput("length must be >= 1")
    picked: list[int] = []
    total = 0
    for x in source:
        x = int(x)
        if x < 1:
            continue
        if x > 2 * total:
            if total + x > INT64_MAX:
                raise ArithmeticOverflow("greedy very-sparse sum left the 64-bit range")
            picked.append(x)
            total += x
            if length is not None and len(picked) == length:
                return GroundSet(tuple(picked))
    if length is not None:
        raise InsufficientSource(
            f"source exhausted after {len(picked)} of {length} elements: {picked}")
    return GroundSet(tuple(picked))


def naturals(start: int = 1) -> Iterator[int]:
    n = start
    while True:
        yield n
        n += 1


@dataclass(frozen=True)
class TailShift:
    e: int
    surviving: int  # |E ∖ e|
    vacuous: bool  # E ∖ e is empty, so the containment holds trivially

    def to_json(self):
        return {"e": self.e, "surviving": self.surviving, "vacuous": self.vacuous}


def tail_shift(D, E, d: int, check: bool = True) -> TailShift:
    """Least e with FS(E ∖ e) ⊆ FS(D ∖ d), for D very sparse and FS(E) ⊆ FS(D)."""
    D, E = as_ground(D), as_ground(E)
    fsD = fs_set(D).as_set()
    if check:
        if not is_very_sparse(D):
            raise InvalidInput(f"D = {D.elements} is not very sparse")
        if not fs_set(E).as_set() <= fsD:
            raise InvalidInput("FS(E) is not contained in FS(D)")
    target = fs_set(D.drop_below(d)).as_set()
    # FS(E ∖ e) only changes when e passes an element, so the least e is 0
    # or one more than an element of E.
    for e in [0] + [x + 1 for x in E.elements]:
        tail = E.drop_below(e)
        if fs_set(tail).as_set() <= target:
            return TailShift(e, len(tail), not tail.elements)
    raise AssertionError("unreachable: E ∖ (max E + 1) is empty")
