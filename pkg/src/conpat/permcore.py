"""Permutations, consecutive occurrences and brute-force oracles.

Permutations are plain tuples of ints in one-line notation (values ``1..n``).
The oracles here enumerate permutations and clusters directly; they are
slow by design and only serve as ground truth for the fast engines.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from conpat.algebra import ONE_T, TPoly, ZERO_T
from conpat.errors import (
    CapExceeded,
    DuplicateEntries,
    InvalidPermutation,
    RedundantPatternSet,
)

Perm = tuple[int, ...]

DEFAULT_BRUTE_CAP = 10


def brute_cap() -> int:
    """Brute-force size cap; ``CONPAT_BRUTE_CAP`` overrides the default."""
    return int(os.environ.get("CONPAT_BRUTE_CAP", DEFAULT_BRUTE_CAP))


def reduce_seq(seq: Sequence[int]) -> Perm:
    """Relabel distinct integers onto ``1..k`` keeping their relative order.

    >>> reduce_seq((5, 3, 8, 6))
    (2, 1, 4, 3)
    """
    ordered = sorted(seq)
    for a, b in zip(ordered, ordered[1:]):
        if a == b:
            raise DuplicateEntries(f"repeated entry {a} in {tuple(seq)}")
    rank = {v: i + 1 for i, v in enumerate(ordered)}
    return tuple(rank[v] for v in seq)


def as_perm(values: Iterable[int]) -> Perm:
    p = tuple(int(v) for v in values)
    if sorted(p) != list(range(1, len(p) + 1)):
        raise InvalidPermutation(f"{p} is not a permutation of 1..{len(p)}")
    return p


def parse_perm(text: str) -> Perm:
    """Parse one-line notation: ``"2 1 4 3"``, ``"2,1,4,3"`` or ``"2143"``."""
    text = text.strip().strip("[]()")
    tokens = [tok for tok in re.split(r"[\s,]+", text) if tok]
    if len(tokens) == 1 and len(tokens[0]) > 1:
        # compact form; only meaningful for patterns of length < 10
        tokens = list(tokens[0])
    return as_perm(int(tok) for tok in tokens)


def reverse(p: Perm) -> Perm:
    return p[::-1]


def complement(p: Perm) -> Perm:
    n = len(p)
    return tuple(n + 1 - v for v in p)


def occurrences(p: Sequence[int], pattern: Perm) -> list[int]:
    """1-based start indices of consecutive occurrences of ``pattern`` in ``p``."""
    m = len(pattern)
    return [
        i + 1
        for i in range(len(p) - m + 1)
        if reduce_seq(p[i : i + m]) == pattern
    ]


def contains(p: Sequence[int], pattern: Perm) -> bool:
    return bool(occurrences(p, pattern))


@dataclass(frozen=True)
class PatternSet:
    """A nonempty, non-redundant set of patterns, stored sorted."""

    patterns: tuple[Perm, ...]

    def __init__(self, patterns: Iterable[Sequence[int]]):
        pats = tuple(sorted({as_perm(p) for p in patterns}, key=lambda q: (len(q), q)))
        if not pats:
            raise ValueError("a pattern set needs at least one pattern")
        for a in pats:
            for b in pats:
                if a != b and len(b) <= len(a) and contains(a, b):
                    raise RedundantPatternSet(f"{_fmt(a)} contains {_fmt(b)}")
        object.__setattr__(self, "patterns", pats)

    def __iter__(self) -> Iterator[Perm]:
        return iter(self.patterns)

    def __len__(self) -> int:
        return len(self.patterns)

    def __contains__(self, p) -> bool:
        return tuple(p) in self.patterns

    @property
    def max_len(self) -> int:
        return max(len(p) for p in self.patterns)

    @property
    def min_len(self) -> int:
        return min(len(p) for p in self.patterns)

    def map(self, fn) -> "PatternSet":
        return PatternSet(fn(p) for p in self.patterns)

    def to_json(self) -> list[list[int]]:
        return [list(p) for p in self.patterns]

    @classmethod
    def parse(cls, text: str) -> "PatternSet":
        """JSON array of arrays, or a single pattern in one-line notation."""
        text = text.strip()
        if text.startswith("[["):
            return cls(json.loads(text))
        if text.startswith("{") or ";" in text:
            return cls(parse_perm(tok) for tok in text.strip("{}").split(";"))
        return cls([parse_perm(text)])

    def __str__(self) -> str:
        return "{" + ", ".join(_fmt(p) for p in self.patterns) + "}"


def _fmt(p: Perm) -> str:
    sep = "" if len(p) < 10 else " "
    return sep.join(str(v) for v in p)


fmt_perm = _fmt


@dataclass(frozen=True)
class Cluster:
    perm: Perm
    intervals: tuple[tuple[int, int], ...]

    @property
    def marks(self) -> int:
        return len(self.intervals)


@dataclass
class AlphaSequence:
    """Counts indexed by permutation length; ``entries[0]`` is length 0.

    With ``track`` set, entries are ``TPoly`` in the occurrence variable,
    otherwise plain integers (avoidance counts).
    """

    entries: list = field(default_factory=list)
    track: bool = False

    def __getitem__(self, n: int):
        return self.entries[n]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries) - 1

    def values(self, start: int = 1) -> list:
        return self.entries[start:]

    def at_t(self, t0: int) -> list[int]:
        if not self.track:
            return list(self.entries)
        return [e(t0) for e in self.entries]

    def to_json(self) -> dict:
        if self.track:
            entries = [TPoly.coerce(e).to_json() for e in self.entries]
        else:
            entries = [str(e) for e in self.entries]
        return {"track": self.track, "entries": entries}

    @classmethod
    def from_json(cls, data: dict) -> "AlphaSequence":
        if data["track"]:
            return cls([TPoly.from_json(e) for e in data["entries"]], True)
        return cls([int(e) for e in data["entries"]], False)


def _check_cap(n: int, cap: int | None) -> None:
    cap = brute_cap() if cap is None else cap
    if n > cap:
        raise CapExceeded(f"brute force limited to length {cap}, asked for {n}")


def _extend(prefix: Perm, r: int) -> Perm:
    """Append a new last entry of rank ``r`` (1-based) among ``len(prefix)+1``."""
    return tuple(v + 1 if v >= r else v for v in prefix) + (r,)


def _windows_ending(perm: Perm, lengths: Iterable[int], patterns: set) -> list[tuple[int, int]]:
    """Occurrences (start, end), 1-based, whose window ends at the last entry."""
    n = len(perm)
    found = []
    for m in lengths:
        if m <= n and reduce_seq(perm[n - m :]) in patterns:
            found.append((n - m + 1, n))
    return found


def brute_alpha(B: PatternSet, n: int, track_t: bool = False, cap: int | None = None) -> AlphaSequence:
    """Occurrence distributions by exhaustive enumeration, lengths ``0..n``.

    Permutations are grown one entry at a time by choosing the relative
    rank of the new last entry; a window's pattern only depends on relative
    order, so occurrences ending at each new entry are final once counted.
    In avoidance mode prefixes containing an occurrence are pruned.
    """
    _check_cap(n, cap)
    pats = set(B.patterns)
    lengths = sorted({len(p) for p in B})
    totals: list[dict[int, int]] = [dict() for _ in range(n + 1)]
    totals[0][0] = 1

    def walk(prefix: Perm, occ: int) -> None:
        size = len(prefix)
        bucket = totals[size]
        bucket[occ] = bucket.get(occ, 0) + 1
        if size == n:
            return
        for r in range(1, size + 2):
            nxt = _extend(prefix, r)
            extra = len(_windows_ending(nxt, lengths, pats))
            if extra and not track_t:
                continue
            walk(nxt, occ + extra)

    if n >= 1:
        walk((1,), len(_windows_ending((1,), lengths, pats)))
    if track_t:
        entries = [TPoly([d.get(k, 0) for k in range(max(d) + 1)]) for d in totals]
    else:
        entries = [d.get(0, 0) for d in totals]
    return AlphaSequence(entries, track_t)


def enumerate_clusters(B: PatternSet, k: int, cap: int | None = None) -> list[Cluster]:
    """Every cluster of length ``k``: a permutation with a chain of marked
    occurrences ``[i1,j1],...,[im,jm]`` where ``i1 = 1``, ``jm = k`` and
    ``i_n < i_{n+1} <= j_n``.
    """
    _check_cap(k, cap)
    pats = set(B.patterns)
    lengths = sorted({len(p) for p in B})
    maxlen = max(lengths)
    out: list[Cluster] = []

    def walk(prefix: Perm, chains: list[tuple[tuple[int, int], ...]]) -> None:
        size = len(prefix)
        if size == k:
            out.extend(Cluster(prefix, ch) for ch in chains if ch[-1][1] == k)
            return
        for r in range(1, size + 2):
            nxt = _extend(prefix, r)
            new = _windows_ending(nxt, lengths, pats)
            grown = []
            for ch in chains:
                s0, e0 = ch[-1]
                if e0 + maxlen - 1 >= size + 1:
                    grown.append(ch)
                for s, e in new:
                    if s0 < s <= e0:
                        grown.append(ch + ((s, e),))
            grown.extend(((s, e),) for s, e in new if s == 1)
            # a chain stays alive only if a later window can still overlap it
            alive = [ch for ch in grown if ch[-1][1] + maxlen - 1 >= size + 2 or ch[-1][1] == size + 1]
            if alive or size + 1 < maxlen:
                walk(nxt, alive)

    walk((1,), [((1, 1),)] if (1,) in pats else [])
    return sorted(out, key=lambda c: (c.perm, c.intervals))


def brute_C(B: PatternSet, k: int, track_t: bool = True, cap: int | None = None) -> TPoly:
    """Sum of ``(t-1)^m`` over all clusters of length ``k``."""
    weight = TPoly((-1, 1))
    total = ZERO_T
    for cl in enumerate_clusters(B, k, cap):
        total = total + weight ** cl.marks
    if not track_t:
        return TPoly((total(0),))
    return total
