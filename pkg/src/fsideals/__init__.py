"""Finite-sums set algebra, finite ideal oracles, FS-refinements, Katětov
witness testing and a finite separation engine."""

__version__ = "0.1.0"

from .errors import (ArithmeticOverflow, DomainExceeded, EnumerationTooLarge, FsIdealsError,
                     InsufficientSource, InvalidChain, InvalidInput, InvalidProbe,
                     SearchTooLarge)
from .ground import (GroundSet, decompositions, fs_set, greedy_very_sparse, is_sparse,
                     is_very_sparse, tail_shift)
from .ideals import OracleConfig, judge, summable_weight
from .katetov import KatetovMap, coloring, search_witness, verify_witness
from .partition import h1_profile, partition_index
from .refine import refine_avoid, refine_fs1
from .search import fs_witness, longest_ap
from .separation import Schedule, build_separation, check_fibers, verify_trace

__all__ = [
    "ArithmeticOverflow", "DomainExceeded", "EnumerationTooLarge", "FsIdealsError",
    "InsufficientSource", "InvalidChain", "InvalidInput", "InvalidProbe", "SearchTooLarge",
    "GroundSet", "decompositions", "fs_set", "greedy_very_sparse", "is_sparse",
    "is_very_sparse", "tail_shift", "OracleConfig", "judge", "summable_weight", "KatetovMap",
    "coloring", "search_witness", "verify_witness", "h1_profile", "partition_index",
    "refine_avoid", "refine_fs1", "fs_witness", "longest_ap", "Schedule", "build_separation",
    "check_fibers", "verify_trace",
]
