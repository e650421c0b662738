"""Wilf-equivalence classification and growth constant estimates.

Both consume avoidance sequences from the tail functional equation engine.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from decimal import ROUND_DOWN, Decimal, localcontext
from fractions import Fraction
from math import factorial
from typing import Optional

from conpat.overlap import (
    EquivCertificate,
    canonical_pattern_sets,
    certificate_up_to_symmetry,
    theorem2_certificate,
)
from conpat.permcore import PatternSet, fmt_perm
from conpat.tailfe import alpha_fast

PROVEN = "proven"
CONJECTURAL = "conjectural"


class InsufficientN(UserWarning):
    """Consecutive ratio estimates have not stabilized to the requested digits."""


def fingerprint(B: PatternSet, N: int) -> tuple[int, ...]:
    return tuple(alpha_fast(B, N).entries)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


@dataclass
class WilfClass:
    members: list[PatternSet]
    status: str
    certificates: list[EquivCertificate] = field(default_factory=list)
    # certified sub-classes; a single entry when the class is proven
    components: list[list[PatternSet]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "members": [B.to_json() for B in self.members],
            "status": self.status,
            "certificates": [c.to_json() for c in self.certificates],
            "components": [[B.to_json() for B in comp] for comp in self.components],
        }

    @classmethod
    def from_json(cls, data: dict) -> "WilfClass":
        return cls(
            [PatternSet(B) for B in data["members"]],
            data["status"],
            [EquivCertificate.from_json(c) for c in data["certificates"]],
            [[PatternSet(B) for B in comp] for comp in data["components"]],
        )


@dataclass
class ClassificationReport:
    pattern_len: int
    set_size: int
    depth: int
    recheck_depth: int
    classes: list[WilfClass] = field(default_factory=list)

    @property
    def proven(self) -> list[WilfClass]:
        return [c for c in self.classes if c.status == PROVEN]

    @property
    def conjectural(self) -> list[WilfClass]:
        return [c for c in self.classes if c.status == CONJECTURAL]

    def nontrivial(self) -> list[WilfClass]:
        """Classes merging more than one symmetry orbit."""
        return [c for c in self.classes if len(c.members) > 1]

    def to_json(self) -> dict:
        return {
            "pattern_len": self.pattern_len,
            "set_size": self.set_size,
            "depth": self.depth,
            "recheck_depth": self.recheck_depth,
            "classes": [c.to_json() for c in self.classes],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ClassificationReport":
        return cls(
            data["pattern_len"],
            data["set_size"],
            data["depth"],
            data["recheck_depth"],
            [WilfClass.from_json(c) for c in data["classes"]],
        )

    def render(self, verbose: bool = False) -> str:
        lines = [
            f"pattern length {self.pattern_len}, set size {self.set_size}, "
            f"fingerprint depth {self.depth} (rechecked to {self.recheck_depth})",
            f"{len(self.classes)} classes: {len(self.proven)} proven, "
            f"{len(self.conjectural)} conjectural",
        ]
        for i, cls_ in enumerate(self.classes, start=1):
            if not verbose and len(cls_.members) == 1:
                continue
            if cls_.status == PROVEN:
                body = " ~ ".join(_set_label(B) for B in cls_.members)
            else:
                body = " ?~ ".join(
                    "[" + " ~ ".join(_set_label(B) for B in comp) + "]"
                    for comp in cls_.components
                )
            lines.append(f"{i:4d}  {cls_.status:<11s} {body}")
        return "\n".join(lines)


def _set_label(B: PatternSet) -> str:
    if len(B) == 1:
        return fmt_perm(B.patterns[0])
    return str(B)


def wilf_classify(pattern_len: int, set_size: int, N: int = 12, recheck: int = 2,
                  symmetry_images: bool = True,
                  reps: Optional[list[PatternSet]] = None) -> ClassificationReport:
    """Group canonical pattern sets by avoidance sequence up to length ``N``
    and certify each group with overlap-profile bijections.

    Groups that are not fully connected by certificates are re-fingerprinted
    at depth ``N + recheck``; the survivors are reported as conjectural.
    With ``symmetry_images`` a certificate may map onto any reversal or
    complement image of the other set.
    """
    reps = canonical_pattern_sets(pattern_len, set_size) if reps is None else reps
    certify = certificate_up_to_symmetry if symmetry_images else theorem2_certificate
    groups: dict[tuple, list[PatternSet]] = {}
    for B in reps:
        groups.setdefault(fingerprint(B, N), []).append(B)

    report = ClassificationReport(pattern_len, set_size, N, N + recheck)
    for members in groups.values():
        report.classes.extend(_resolve_group(members, certify, N + recheck))
    report.classes.sort(key=lambda c: [B.patterns for B in c.members])
    return report


def _resolve_group(members: list[PatternSet], certify, recheck_depth: int) -> list[WilfClass]:
    if len(members) == 1:
        return [WilfClass(members, PROVEN, [], [members])]
    uf = _UnionFind(len(members))
    certs = []
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            if uf.find(i) == uf.find(j):
                continue
            cert = certify(members[i], members[j])
            if cert is not None:
                uf.union(i, j)
                certs.append(cert)
    comps: dict[int, list[PatternSet]] = {}
    for i, B in enumerate(members):
        comps.setdefault(uf.find(i), []).append(B)
    if len(comps) == 1:
        return [WilfClass(members, PROVEN, certs, [members])]

    # uncertified merge: confirm at a deeper fingerprint, splitting if needed
    deeper: dict[tuple, list[int]] = {}
    for i, B in enumerate(members):
        deeper.setdefault(fingerprint(B, recheck_depth), []).append(i)
    out = []
    for idx in deeper.values():
        sub = [members[i] for i in idx]
        sub_comps: dict[int, list[PatternSet]] = {}
        for i in idx:
            sub_comps.setdefault(uf.find(i), []).append(members[i])
        sub_certs = [c for c in certs if c.source in sub]
        status = PROVEN if len(sub_comps) == 1 else CONJECTURAL
        out.append(WilfClass(sub, status, sub_certs, list(sub_comps.values())))
    return out


# ---------------------------------------------------------------------------
# asymptotics


def render_decimal(x: Fraction, digits: int) -> str:
    """Decimal expansion of ``x`` truncated to ``digits`` places."""
    with localcontext() as ctx:
        ctx.prec = digits + len(str(abs(x.numerator) // x.denominator)) + 5
        d = Decimal(x.numerator) / Decimal(x.denominator)
        return str(d.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_DOWN))


@dataclass
class AsymEstimate:
    patterns: PatternSet
    rho: Fraction
    gamma: Fraction
    N: int
    digits: int
    stabilization: Fraction
    insufficient: bool = False
    extrapolated: bool = False

    @property
    def rho_str(self) -> str:
        return render_decimal(self.rho, self.digits)

    @property
    def gamma_str(self) -> str:
        return render_decimal(self.gamma, self.digits)

    def to_json(self) -> dict:
        return {
            "patterns": self.patterns.to_json(),
            "rho": self.rho_str,
            "gamma": self.gamma_str,
            "N": self.N,
            "digits": self.digits,
            "stabilization": render_decimal(self.stabilization, self.digits + 5),
            "insufficient_n": self.insufficient,
            "extrapolated": self.extrapolated,
        }


def ratio_estimates(alpha: list[int], n: int) -> Fraction:
    return Fraction(alpha[n], n * alpha[n - 1])


def asym_estimate(B: PatternSet, N: int, digits: int, aitken: bool = False,
                  alpha: Optional[list[int]] = None) -> AsymEstimate:
    """Estimate ``gamma`` and ``rho`` in ``alpha(n) ~ gamma * rho^n * n!``.

    ``rho`` is ``alpha(N) / (N alpha(N-1))``; ``gamma`` is
    ``alpha(N) / (rho^N N!)``.  Both stay exact rationals until rendering.
    """
    if N < 4 or digits < 1:
        raise ValueError("need N >= 4 and digits >= 1")
    alpha = alpha if alpha is not None else alpha_fast(B, N).entries
    r1, r2 = ratio_estimates(alpha, N - 1), ratio_estimates(alpha, N)
    rho = r2
    if aitken:
        r0 = ratio_estimates(alpha, N - 2)
        d1, d2 = r1 - r0, r2 - r1
        if d2 != d1:
            rho = r2 - d2 * d2 / (d2 - d1)
    gamma = Fraction(alpha[N]) / (rho ** N * factorial(N))
    stab = abs(r2 - r1)
    insufficient = stab > Fraction(1, 10 ** digits)
    if insufficient:
        warnings.warn(
            f"ratio estimates for {B} moved by {float(stab):.3g} between N-1 and N",
            InsufficientN,
            stacklevel=2,
        )
    return AsymEstimate(B, rho, gamma, N, digits, stab, insufficient, aitken)


@dataclass
class AsymRow:
    members: list[PatternSet]
    estimate: AsymEstimate

    @property
    def label(self) -> str:
        return " ~ ".join(_set_label(B) for B in self.members)

    def to_json(self) -> dict:
        return {"members": [B.to_json() for B in self.members], **self.estimate.to_json()}


def asym_rank(pattern_len: int, N: int, digits: int, aitken: bool = False) -> list[AsymRow]:
    """One row per equivalence class of single patterns, by ``rho`` descending."""
    groups: dict[tuple, list[PatternSet]] = {}
    for B in canonical_pattern_sets(pattern_len, 1):
        groups.setdefault(tuple(alpha_fast(B, N).entries), []).append(B)
    rows = []
    for alpha, members in groups.items():
        est = asym_estimate(members[0], N, digits, aitken, alpha=list(alpha))
        rows.append(AsymRow(members, est))
    rows.sort(key=lambda r: (-r.estimate.rho, r.members[0].patterns))
    return rows


def render_asym_table(rows: list[AsymRow]) -> str:
    width = max([len("Pattern")] + [len(r.label) for r in rows])
    lines = [f"{'Pattern':<{width}}  {'gamma':<14s}  rho"]
    for r in rows:
        lines.append(f"{r.label:<{width}}  {r.estimate.gamma_str:<14s}  {r.estimate.rho_str}")
    return "\n".join(lines)
