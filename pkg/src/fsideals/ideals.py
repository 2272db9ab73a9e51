"""Finite-depth oracles for the summable, van der Waerden, Hindman and Folkman ideals.

A "small" verdict is exhaustion evidence at the configured depth, never a
claim of ideal membership; every judgement records the depth it used.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import InvalidInput
from .search import ApWitness, FsWitness, fs_witness, longest_ap

IDEALS = ("summable", "vdW", "hindman", "folkman")

DEFAULT_FS_DEPTH = 4
DEFAULT_AP_LENGTH = 5
DEFAULT_WEIGHT_THRESHOLD = Fraction(10)


@dataclass(frozen=True)
class OracleConfig:
    ideal_id: str
    weight_threshold: Fraction | None = None
    ap_length: int | None = None
    fs_depth: int | None = None

    def __post_init__(self):
        if self.ideal_id not in IDEALS:
            raise InvalidInput(f"unknown ideal {self.ideal_id!r}")
        wanted = {"summable": "weight_threshold", "vdW": "ap_length",
                  "hindman": "fs_depth", "folkman": "fs_depth"}[self.ideal_id]
        for name in ("weight_threshold", "ap_length", "fs_depth"):
            if (getattr(self, name) is None) == (name == wanted):
                raise InvalidInput(f"{self.ideal_id} oracle: {name} must "
                                   f"{'be set' if name == wanted else 'not be set'}")
        if self.weight_threshold is not None:
            object.__setattr__(self, "weight_threshold", Fraction(self.weight_threshold))
            if self.weight_threshold <= 0:
                raise InvalidInput("weight_threshold must be > 0")
        if self.ap_length is not None and self.ap_length < 1:
            raise InvalidInput("ap_length must be >= 1")
        if self.fs_depth is not None and self.fs_depth < 1:
            raise InvalidInput("fs_depth must be >= 1")

    @classmethod
    def summable(cls, threshold=DEFAULT_WEIGHT_THRESHOLD):
        return cls("summable", weight_threshold=Fraction(threshold))

    @classmethod
    def vdw(cls, length=DEFAULT_AP_LENGTH):
        return cls("vdW", ap_length=length)

    @classmethod
    def hindman(cls, depth=DEFAULT_FS_DEPTH):
        return cls("hindman", fs_depth=depth)

    @classmethod
    def folkman(cls, depth=DEFAULT_FS_DEPTH):
        return cls("folkman", fs_depth=depth)

    @property
    def depth(self):
        return self.fs_depth or self.ap_length or 0

    def to_json(self):
        out = {"ideal": self.ideal_id}
        if self.weight_threshold is not None:
            out["weight_threshold"] = fraction_json(self.weight_threshold)
        if self.ap_length is not None:
            out["ap_length"] = self.ap_length
        if self.fs_depth is not None:
            out["fs_depth"] = self.fs_depth
        return out


def fraction_json(q: Fraction) -> dict:
    return {"numerator": str(q.numerator), "denominator": str(q.denominator),
            "float": float(q)}


@dataclass(frozen=True)
class Judgement:
    verdict: str  # "small" | "positive"
    evidence: object  # FsWitness, ApWitness, Fraction or None
    depth_used: int
    ideal_id: str = ""
    weight: Fraction | None = field(default=None)

    @property
    def positive(self) -> bool:
        return self.verdict == "positive"

    def to_json(self):
        ev = self.evidence
        if isinstance(ev, (FsWitness, ApWitness)):
            ev = ev.to_json()
        elif isinstance(ev, Fraction):
            ev = fraction_json(ev)
        out = {"ideal": self.ideal_id, "verdict": self.verdict,
               "depth": self.depth_used, "evidence": ev}
        if self.weight is not None:
            out["weight"] = fraction_json(self.weight)
        return out


def summable_weight(A: Iterable[int]) -> Fraction:
    A = set(int(a) for a in A)
    if any(a < 0 for a in A):
        raise InvalidInput("summable weight is defined on naturals")
    return sum((Fraction(1, a + 1) for a in A), Fraction(0))


def judge(A: Iterable[int], cfg: OracleConfig) -> Judgement:
    A = set(int(a) for a in A)
    ideal = cfg.ideal_id
    if ideal == "summable":
        w = summable_weight(A)
        verdict = "positive" if w >= cfg.weight_threshold else "small"
        return Judgement(verdict, w, 0, ideal, w)
    if ideal == "vdW":
        if not A:
            return Judgement("small", None, cfg.ap_length, ideal)
        ap = longest_ap(A)
        if ap.length >= cfg.ap_length:
            return Judgement("positive", ap.truncate(cfg.ap_length), cfg.ap_length, ideal)
        return Judgement("small", ap, cfg.ap_length, ideal)
    # 0 is never a finite sum of positive integers, so it cannot help a witness
    w = fs_witness(sorted(a for a in A if a > 0), cfg.fs_depth)
    verdict = "small" if w is None else "positive"
    return Judgement(verdict, w, cfg.fs_depth, ideal)


def recheck(A: Iterable[int], judgement: Judgement) -> bool:
    """Re-verify a positive judgement's evidence against A by direct evaluation."""
    from . import naive

    A = set(int(a) for a in A)
    ev = judgement.evidence
    if not judgement.positive:
        return True
    if isinstance(ev, FsWitness):
        return len(ev.ground) == judgement.depth_used and naive.fs(ev.ground.elements) <= A
    if isinstance(ev, ApWitness):
        return ev.length >= judgement.depth_used and set(ev.terms()) <= A
    if isinstance(ev, Fraction):
        return ev == sum((Fraction(1, a + 1) for a in A), Fraction(0))
    return False
