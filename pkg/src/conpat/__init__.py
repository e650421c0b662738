"""Exact counting of permutations under consecutive pattern constraints.

Three engines produce the same numbers:

* brute force enumeration (:mod:`conpat.permcore`),
* the cluster recurrence over pattern tails (:mod:`conpat.scheme`),
* the cluster tail functional equation (:mod:`conpat.tailfe`).

:mod:`conpat.analysis` builds Wilf-equivalence classifications and growth
constant estimates on top of the fast engine.
"""

from conpat.algebra import TPoly, UPoly, URat
from conpat.errors import (
    CapExceeded,
    ConpatError,
    DegenerateBase,
    DuplicateEntries,
    NonDivisible,
    RedundantPatternSet,
)
from conpat.permcore import AlphaSequence, Cluster, PatternSet, reduce_seq

__all__ = [
    "AlphaSequence",
    "CapExceeded",
    "Cluster",
    "ConpatError",
    "DegenerateBase",
    "DuplicateEntries",
    "NonDivisible",
    "PatternSet",
    "RedundantPatternSet",
    "TPoly",
    "UPoly",
    "URat",
    "reduce_seq",
]

__version__ = "0.1.0"
