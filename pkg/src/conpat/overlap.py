"""Overlap maps between patterns, trivial symmetries and equivalence certificates."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from math import comb, factorial
from typing import Iterable, Optional

from conpat.errors import CapExceeded
from conpat.permcore import PatternSet, Perm, complement, reduce_seq, reverse

OverlapMap = frozenset  # of (pi_r, sigma_{n-j+r}) pairs
DEFAULT_ENUM_CAP = 2_000_000


def overlap_map(sigma: Perm, pi: Perm, j: int) -> Optional[OverlapMap]:
    """Pairing of the head of ``pi`` with the tail of ``sigma`` over ``j``
    positions, or ``None`` when the two windows are not order-isomorphic."""
    n = len(sigma)
    if reduce_seq(sigma[n - j :]) != reduce_seq(pi[:j]):
        return None
    return frozenset((pi[r], sigma[n - j + r]) for r in range(j))


@dataclass(frozen=True)
class OverlapProfile:
    """All proper overlaps of a tail of ``sigma`` with a head of ``pi``."""

    maps: frozenset

    def by_length(self) -> dict[int, OverlapMap]:
        return {len(m): m for m in self.maps}

    def to_json(self) -> list:
        return [[len(m), sorted([list(p) for p in m])] for m in sorted(self.maps, key=lambda m: (len(m), sorted(m)))]

    @classmethod
    def from_json(cls, data) -> "OverlapProfile":
        return cls(frozenset(frozenset(tuple(p) for p in pairs) for _, pairs in data))

    def __str__(self) -> str:
        inner = ", ".join(
            "{" + ", ".join(f"({a},{b})" for a, b in sorted(m, reverse=True)) + "}"
            for m in sorted(self.maps, key=len)
        )
        return "{" + inner + "}"


def overlap_maps(sigma: Perm, pi: Perm) -> OverlapProfile:
    """Overlaps of length ``1 <= j < min(|sigma|, |pi|)`` where the last ``j``
    entries of ``sigma`` reduce to the same pattern as the first ``j`` of ``pi``."""
    found = []
    for j in range(1, min(len(sigma), len(pi))):
        m = overlap_map(sigma, pi, j)
        if m is not None:
            found.append(m)
    return OverlapProfile(frozenset(found))


@dataclass(frozen=True)
class EquivCertificate:
    """Length-preserving bijection ``B -> B'`` with matching overlap profiles."""

    source: PatternSet
    target: PatternSet
    pairing: tuple[tuple[Perm, Perm], ...]

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "pairing": [[list(a), list(b)] for a, b in self.pairing],
        }

    @classmethod
    def from_json(cls, data: dict) -> "EquivCertificate":
        return cls(
            PatternSet(data["source"]),
            PatternSet(data["target"]),
            tuple((tuple(a), tuple(b)) for a, b in data["pairing"]),
        )


def theorem2_certificate(B: PatternSet, Bp: PatternSet) -> Optional[EquivCertificate]:
    """Search every length-preserving bijection for one under which all
    pairwise overlap profiles agree.  Returns ``None`` if none exists."""
    if len(B) != len(Bp):
        return None
    src = list(B)
    if sorted(len(p) for p in src) != sorted(len(p) for p in Bp):
        return None
    profile = {(a, b): overlap_maps(a, b) for a in src for b in src}
    targets = list(Bp)
    target_profile = {(a, b): overlap_maps(a, b) for a in targets for b in targets}

    def extend(i: int, chosen: list[Perm]) -> Optional[list[Perm]]:
        if i == len(src):
            return chosen
        for cand in targets:
            if cand in chosen or len(cand) != len(src[i]):
                continue
            trial = chosen + [cand]
            ok = all(
                profile[(src[a], src[b])] == target_profile[(trial[a], trial[b])]
                for a in range(i + 1)
                for b in range(i + 1)
                if a == i or b == i
            )
            if ok:
                res = extend(i + 1, trial)
                if res is not None:
                    return res
        return None

    image = extend(0, [])
    if image is None:
        return None
    return EquivCertificate(B, Bp, tuple(zip(src, image)))


SYMMETRIES = {
    "id": lambda p: p,
    "r": reverse,
    "c": complement,
    "rc": lambda p: reverse(complement(p)),
}


def symmetry_images(B: PatternSet) -> dict[str, PatternSet]:
    return {name: B.map(fn) for name, fn in SYMMETRIES.items()}


def symmetry_orbit(B: PatternSet) -> set[PatternSet]:
    return set(symmetry_images(B).values())


def certificate_up_to_symmetry(B: PatternSet, Bp: PatternSet) -> Optional[EquivCertificate]:
    """Try ``B`` against each trivial-symmetry image of ``Bp``."""
    for image in symmetry_images(Bp).values():
        cert = theorem2_certificate(B, image)
        if cert is not None:
            return cert
    return None


def _encoding(B: PatternSet) -> tuple:
    return B.patterns


def canonical(B: PatternSet) -> PatternSet:
    """Lexicographically least member of the symmetry orbit of ``B``."""
    return min(symmetry_orbit(B), key=_encoding)


def canonical_pattern_sets(pattern_len: int, set_size: int, cap: int | None = None) -> list[PatternSet]:
    """One representative per symmetry orbit of ``set_size``-subsets of
    ``S_pattern_len``, in lexicographic order of the sorted pattern tuples."""
    if pattern_len < 2:
        raise ValueError("pattern length must be at least 2")
    cap = int(os.environ.get("CONPAT_ENUM_CAP", DEFAULT_ENUM_CAP)) if cap is None else cap
    space = comb(factorial(pattern_len), set_size)
    if space > cap:
        raise CapExceeded(f"{space} candidate pattern sets exceed the cap {cap}")
    perms = list(itertools.permutations(range(1, pattern_len + 1)))
    reps = []
    for combo in itertools.combinations(perms, set_size):
        B = PatternSet(combo)
        if B.patterns == combo and canonical(B) == B:
            reps.append(B)
    return sorted(reps, key=_encoding)


def orbit_sizes(reps: Iterable[PatternSet]) -> list[int]:
    return [len(symmetry_orbit(B)) for B in reps]
