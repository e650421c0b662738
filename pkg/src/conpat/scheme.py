"""Cluster recurrence over pattern tails.

``C(k, p; x)`` is the total weight of length-``k`` clusters whose last marked
occurrence is ``p`` and occupies the value set ``x`` (sorted).  Removing the
last marked occurrence leaves a shorter cluster ending in some ``p2`` that
overlapped ``p`` in ``j`` positions; the shared values are fixed by ``x``
up to the number of removed values below each of them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Iterator, Optional

from conpat.algebra import TPoly
from conpat.overlap import overlap_maps
from conpat.permcore import AlphaSequence, PatternSet, Perm, fmt_perm

TRACK_WEIGHT = TPoly((-1, 1))
AVOID_WEIGHT = -1


def weight_for(track_t: bool):
    return TRACK_WEIGHT if track_t else AVOID_WEIGHT


@dataclass(frozen=True)
class Transition:
    """Removing last occurrence ``last`` that overlapped ``prev`` in ``overlap`` positions.

    ``determined`` holds ``(y_slot, x_index, minus)`` triples: slot
    ``y_slot`` of the shorter cluster's tail equals ``x[x_index] - minus``
    (all 1-based).
    """

    last: Perm
    prev: Perm
    overlap: int
    determined: tuple[tuple[int, int, int], ...]

    @property
    def k_shift(self) -> int:
        return len(self.last) - self.overlap

    def to_json(self) -> dict:
        return {
            "last_pattern": list(self.last),
            "prev_pattern": list(self.prev),
            "overlap_len": self.overlap,
            "k_shift": self.k_shift,
            "determined_slots": [
                {"y": y, "x": x, "minus": c} for y, x, c in self.determined
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Transition":
        return cls(
            tuple(data["last_pattern"]),
            tuple(data["prev_pattern"]),
            data["overlap_len"],
            tuple((d["y"], d["x"], d["minus"]) for d in data["determined_slots"]),
        )


@dataclass
class ClusterScheme:
    B: PatternSet
    transitions: dict[Perm, list[Transition]] = field(default_factory=dict)

    def for_pattern(self, p: Perm) -> list[Transition]:
        return self.transitions.get(p, [])

    def all_transitions(self) -> list[Transition]:
        return [tr for p in self.B for tr in self.for_pattern(p)]

    def to_json(self) -> dict:
        return {
            "patterns": self.B.to_json(),
            "transitions": [tr.to_json() for tr in self.all_transitions()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ClusterScheme":
        B = PatternSet(data["patterns"])
        sch = cls(B, {p: [] for p in B})
        for d in data["transitions"]:
            tr = Transition.from_json(d)
            sch.transitions[tr.last].append(tr)
        return sch

    def render(self) -> str:
        return render_scheme(self)


def make_transition(prev: Perm, last: Perm, omap) -> Transition:
    j = len(omap)
    chopped = last[j:]
    head_value = {last[r]: r for r in range(j)}
    determined = []
    for x_index, y_slot in sorted(omap, key=lambda pr: head_value[pr[0]]):
        minus = sum(1 for v in chopped if v < x_index)
        determined.append((y_slot, x_index, minus))
    return Transition(last, prev, j, tuple(sorted(determined)))


def build_scheme(B: PatternSet) -> ClusterScheme:
    """One transition per pattern pair ``(prev, last)`` and per proper overlap."""
    sch = ClusterScheme(B, {p: [] for p in B})
    for last in B:
        for prev in B:
            for omap in sorted(overlap_maps(prev, last).maps, key=len):
                sch.transitions[last].append(make_transition(prev, last, omap))
    return sch


def completions(size: int, top: int, fixed: dict[int, int]) -> Iterator[tuple[int, ...]]:
    """Strictly increasing ``size``-tuples in ``[1, top]`` with given slots fixed."""
    slots = sorted(fixed)
    prev_slot, prev_val = 0, 0
    for s in slots:
        v = fixed[s]
        if v - prev_val < s - prev_slot:
            return
        prev_slot, prev_val = s, v
    if top - prev_val < size - prev_slot:
        return

    segments = []
    prev_slot, prev_val = 0, 0
    for s in slots + [size + 1]:
        hi_val = fixed[s] if s <= size else top + 1
        free = s - prev_slot - 1
        segments.append(list(itertools.combinations(range(prev_val + 1, hi_val), free)))
        if s <= size:
            prev_slot, prev_val = s, fixed[s]

    for parts in itertools.product(*segments):
        out = []
        for i, seg in enumerate(parts):
            out.extend(seg)
            if i < len(slots):
                out.append(fixed[slots[i]])
        yield tuple(out)


class SchemeEvaluator:
    """Memoized evaluation of ``C(k, p; x)`` from a scheme."""

    def __init__(self, scheme: ClusterScheme, track_t: bool = True, memo: bool = True):
        self.scheme = scheme
        self.weight = weight_for(track_t)
        self.zero = TPoly() if track_t else 0
        self.use_memo = memo
        self.memo: dict[tuple, object] = {}

    def C_tail(self, k: int, p: Perm, tail: tuple[int, ...]):
        key = (p, k, tail)
        if self.use_memo and key in self.memo:
            return self.memo[key]
        m = len(p)
        if k < m:
            val = self.zero
        elif k == m:
            val = self.weight if tail == tuple(range(1, m + 1)) else self.zero
        else:
            val = self.zero
            for tr in self.scheme.for_pattern(p):
                top = k - tr.k_shift
                fixed = {y: tail[x - 1] - c for y, x, c in tr.determined}
                acc = self.zero
                for ytail in completions(len(tr.prev), top, fixed):
                    acc = acc + self.C_tail(top, tr.prev, ytail)
                val = val + self.weight * acc
        if self.use_memo:
            self.memo[key] = val
        return val

    def C_of_p(self, k: int, p: Perm):
        total = self.zero
        for tail in itertools.combinations(range(1, k + 1), len(p)):
            total = total + self.C_tail(k, p, tail)
        return total

    def C(self, k: int):
        total = self.zero
        for p in self.scheme.B:
            total = total + self.C_of_p(k, p)
        return total


def eval_C_tail(scheme: ClusterScheme, k: int, p: Perm, tail, track_t: bool = True):
    return SchemeEvaluator(scheme, track_t).C_tail(k, tuple(p), tuple(tail))


def C_of_k(scheme: ClusterScheme, k: int, track_t: bool = True):
    return SchemeEvaluator(scheme, track_t).C(k)


def master_recurrence(C: Callable[[int], object], n: int, track_t: bool) -> AlphaSequence:
    """``a(n) = n a(n-1) + sum_{k=1..n} binom(n,k) C(k) a(n-k)``, ``a(0) = 1``."""
    one = TPoly((1,)) if track_t else 1
    alpha = [one]
    cvals = [None]
    for size in range(1, n + 1):
        cvals.append(C(size))
        acc = size * alpha[size - 1]
        for k in range(1, size + 1):
            ck = cvals[k]
            if ck:
                acc = acc + comb(size, k) * ck * alpha[size - k]
        alpha.append(acc)
    return AlphaSequence(alpha, track_t)


def alpha_via_scheme(B: PatternSet, n: int, track_t: bool = False,
                     scheme: Optional[ClusterScheme] = None) -> AlphaSequence:
    ev = SchemeEvaluator(scheme or build_scheme(B), track_t)
    return master_recurrence(ev.C, n, track_t)


def _xs(m: int, var: str = "x") -> str:
    return ", ".join(f"{var}{i}" for i in range(1, m + 1))


def render_scheme(sch: ClusterScheme) -> str:
    single = len(sch.B) == 1
    lines = []
    for p in sch.B:
        m = len(p)
        head = f"C(k;[{_xs(m)}])" if single else f"C(k,{fmt_perm(p)};[{_xs(m)}])"
        lines.append(f"{head} = 0  for k < {m}")
        lines.append(f"{head} = w({fmt_perm(p)})  for k = {m}")
        parts = []
        for tr in sch.for_pattern(p):
            m2 = len(tr.prev)
            conds = [f"1 <= {' < '.join(f'y{i}' for i in range(1, m2 + 1))} <= k-{tr.k_shift}"]
            for y, x, c in tr.determined:
                conds.append(f"y{y} = x{x}" + (f" - {c}" if c else ""))
            inner = f"C(k-{tr.k_shift};[{_xs(m2, 'y')}])" if single else \
                f"C(k-{tr.k_shift},{fmt_perm(tr.prev)};[{_xs(m2, 'y')}])"
            parts.append(f"sum_{{{', '.join(conds)}}} w({fmt_perm(p)}) * {inner}")
        if parts:
            lines.append(f"{head} =  for k > {m}")
            lines.append("    " + "\n  + ".join(parts))
        else:
            lines.append(f"{head} = 0  for k > {m}")
    return "\n".join(lines)
