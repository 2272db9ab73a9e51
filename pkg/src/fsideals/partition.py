"""Partition of the positive integers by 2-adic valuation.

Cell k holds the numbers n*2^(k+1) + 2^k, i.e. exactly those whose lowest set
bit is 2^k.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput
from .ground import as_ground, fs_set


def partition_index(x: int) -> int:
    if x < 1:
        raise InvalidInput(f"partition index needs x >= 1, got {x}")
    return (x & -x).bit_length() - 1


def in_cell(x: int, k: int) -> bool:
    """Membership in cell k straight from the form n*2^(k+1) + 2^k."""
    return x >= 2**k and (x - 2**k) % 2 ** (k + 1) == 0


@dataclass(frozen=True)
class PartitionProfile:
    per_cell: dict  # k -> (in-cell count, complement count)
    total: int

    @property
    def max_cell(self) -> int:
        return max(self.per_cell, key=lambda k: (self.per_cell[k][0], -k))

    @property
    def min_complement(self) -> int:
        return min(out for _, out in self.per_cell.values())

    def to_json(self):
        return {"total": self.total, "max_cell": self.max_cell,
                "min_complement": self.min_complement,
                "cells": {str(k): {"in": a, "out": b} for k, (a, b) in self.per_cell.items()}}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "in_cell", "complement"])
        for k, (a, b) in sorted(self.per_cell.items()):
            w.writerow([k, a, b])
        return buf.getvalue()


def h1_profile(D) -> PartitionProfile:
    """Counts of FS(D) inside and outside each cell 0..floor(log2(max FS(D)))."""
    vals = np.asarray(fs_set(as_ground(D)).values, dtype=np.int64)
    if vals.size == 0:
        raise InvalidInput("profile of an empty ground set")
    lowbit = vals & -vals
    ks = np.log2(lowbit).astype(np.int64)
    top = int(vals[-1]).bit_length() - 1
    counts = np.bincount(ks, minlength=top + 1)
    total = int(vals.size)
    return PartitionProfile({k: (int(counts[k]), total - int(counts[k])) for k in range(top + 1)},
                            total)
