"""Exhaustive witness searches.

Hosts are encoded as Python-int bitsets (bit x set iff x is in the host), so
"x + s lies in A for every candidate x" becomes ``cand & (A >> s)``.  The
depth-first search tries candidates in increasing order, so the first witness
found is the lexicographically least one and "none" is a proof that no
witness exists at that depth.
"""
from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DomainExceeded, InvalidInput, SearchTooLarge
from .ground import GroundSet, as_ground, fs_set

DEPTH_CAP = int(os.environ.get("FSIDEALS_DEPTH_CAP", 8))
UNIVERSE_CEILING = 1 << 27


def host_hash(A) -> str:
    data = ",".join(map(str, sorted(int(a) for a in A))).encode()
    return hashlib.sha256(data).hexdigest()[:16]


@dataclass(frozen=True)
class FsWitness:
    ground: GroundSet
    host_hash: str

    def to_json(self):
        return {"kind": "fs", "elements": self.ground.to_json(), "host_hash": self.host_hash}


@dataclass(frozen=True)
class ApWitness:
    start: int
    step: int
    length: int
    host_hash: str = ""

    def terms(self):
        return [self.start + i * self.step for i in range(self.length)]

    def truncate(self, length: int) -> "ApWitness":
        return ApWitness(self.start, self.step, min(length, self.length), self.host_hash)

    def to_json(self):
        return {"kind": "ap", "start": self.start, "step": self.step,
                "length": self.length, "host_hash": self.host_hash}


def to_bitset(values) -> int:
    arr = np.asarray(sorted(set(int(v) for v in values)), dtype=np.int64)
    if arr.size == 0:
        return 0
    flags = np.zeros(int(arr[-1]) + 1, dtype=bool)
    flags[arr] = True
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _search(host: int, k: int, node_budget: int | None = None) -> tuple[int, ...] | None:
    """Lex-least D with |D| = k and FS(D) ⊆ host (host has no bit 0)."""
    if host == 0:
        return None
    top = host.bit_length() - 1
    nodes = [0]

    def extend(chosen, fs_vals, total, cand):
        nodes[0] += 1
        if node_budget is not None and nodes[0] > node_budget:
            raise SearchTooLarge(f"node budget {node_budget} spent at depth {k}")
        r = k - len(chosen)
        if r == 0:
            return tuple(chosen)
        # the final sum total + x + (x+1) + ... must stay <= top
        bound = (top - total - r * (r - 1) // 2) // r
        if bound < 0:
            return None
        todo = cand & ((1 << (bound + 1)) - 1)
        while todo:
            low = todo & -todo
            x = low.bit_length() - 1
            todo ^= low
            if r == 1:
                return tuple(chosen) + (x,)
            nxt = (cand >> (x + 1) << (x + 1)) & (host >> x)
            for s in fs_vals:
                if not nxt:
                    break
                nxt &= host >> (s + x)
            if nxt.bit_count() < r - 1:
                continue
            found = extend(chosen + [x], fs_vals + [x] + [s + x for s in fs_vals],
                           total + x, nxt)
            if found is not None:
                return found
        return None

    return extend([], [], 0, host)


def fs_witness(A: Iterable[int], k: int, universe_cap: int | None = None,
               depth_cap: int | None = None, node_budget: int | None = None) -> FsWitness | None:
    """Lexicographically least D, |D| = k, with FS(D) ⊆ A; None if there is none.

    With a ``node_budget`` an unfinished search raises SearchTooLarge rather
    than returning None, so None always means the space was exhausted.
    """
    A = sorted(set(int(a) for a in A))
    depth_cap = DEPTH_CAP if depth_cap is None else depth_cap
    if k < 1:
        raise InvalidInput("witness depth must be >= 1")
    if k > depth_cap:
        raise SearchTooLarge(f"depth {k} exceeds depth cap {depth_cap}")
    if not A:
        return None
    if universe_cap is None:
        universe_cap = A[-1]
    if A[0] < 1 or A[-1] > universe_cap:
        raise InvalidInput(f"host must lie in [1, {universe_cap}]")
    if universe_cap > UNIVERSE_CEILING:
        raise SearchTooLarge(f"universe {universe_cap} exceeds {UNIVERSE_CEILING}")
    found = _search(to_bitset(A), k, node_budget)
    if found is None:
        return None
    return FsWitness(GroundSet(found), host_hash(A))


def longest_ap(A: Iterable[int]) -> ApWitness:
    """Longest AP inside A; ties go to the smallest step, then smallest start."""
    A = sorted(set(int(a) for a in A))
    if not A:
        raise InvalidInput("longest_ap needs a nonempty set")
    h = host_hash(A)
    best = (1, -1, -A[0])
    # ends[j][step] = length of the longest AP with that step ending at A[j]
    ends: list[dict[int, int]] = [dict() for _ in A]
    for j, b in enumerate(A):
        row = ends[j]
        for i in range(j):
            step = b - A[i]
            n = ends[i].get(step, 1) + 1
            row[step] = n
            key = (n, -step, -(b - (n - 1) * step))
            if key > best:
                best = key
    n, negstep, negstart = best
    return ApWitness(-negstart, -negstep, n, h)


def _fs_array(ground: GroundSet) -> np.ndarray:
    return np.asarray(fs_set(ground).values, dtype=np.int64)


def _translated_values(f, t: int, ground: GroundSet):
    fs = _fs_array(ground)
    if fs.size and t + int(fs[-1]) >= f.domain_size:
        raise DomainExceeded(
            f"t + max FS(ground) = {t + int(fs[-1])} is outside [0, {f.domain_size})")
    return fs, f.table[t + fs]


def translate_constant_witness(f, t: int, ground, k: int, node_budget: int | None = None):
    """Least C (|C| = k, FS(C) ⊆ FS(ground)) with f constant on t + FS(C).

    Returns ``(C, c)`` or None.
    """
    ground = as_ground(ground)
    fs, vals = _translated_values(f, t, ground)
    best = None
    for c in np.unique(vals):
        w = fs_witness(fs[vals == c].tolist(), k, node_budget=node_budget)
        if w is not None and (best is None or w.ground.elements < best[0].elements):
            best = (w.ground, int(c))
    return best


def avoid_witness(f, t: int, bound: int, ground, k: int,
                  node_budget: int | None = None) -> GroundSet | None:
    """Least C (|C| = k, FS(C) ⊆ FS(ground)) with f(t + s) > bound on FS(C)."""
    ground = as_ground(ground)
    fs, vals = _translated_values(f, t, ground)
    w = fs_witness(fs[vals > bound].tolist(), k, node_budget=node_budget)
    return None if w is None else w.ground
