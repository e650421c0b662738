"""Cluster tail generating functions and their functional equations.

For a pattern ``p`` of length ``m``::

    F(k, p; z1..zm) = sum over tails x of C(k, p; x) * z1^x1 * ... * zm^xm

Substituting the tail recurrence into this sum and summing out the removed
tail entries with the finite geometric series gives a functional equation::

    F(k, p; z) = (t-1) * sum_i R_i(z) * F(k - d_i, p_i; [M_i1(z), ..., M_i|p_i|(z)])

with ``R_i`` a signed monomial over a product of ``(1 - D)`` factors and
``M_ij`` monomials.  :func:`build_tail_fe` derives the terms symbolically.

Evaluation substitutes ``z_j = u^(B^(j-1))`` (``B`` larger than any tail
value), which encodes each tail injectively as a power of ``u``.  Each
geometric split of the derivation is undone by an exact division by
``1 - u^a``, so no intermediate expression is ever singular.  The memoized
result is the explicit tail polynomial of ``F(k, p)``; any other collapse
``z_j = u^e_j``, including ``u = 1`` for ``C(k)``, is a substitution into it.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional, Sequence

from conpat.algebra import ONE_U, TPoly, U, UPoly, URat, upoly_eval_u1, urat_to_poly
from conpat.errors import DegenerateBase, NonDivisible
from conpat.permcore import AlphaSequence, PatternSet, Perm, fmt_perm
from conpat.scheme import ClusterScheme, Transition, build_scheme, master_recurrence, weight_for

ZMono = tuple[int, ...]


@dataclass(frozen=True)
class Affine:
    """``x_var + kcoef * k + const``; ``var`` is ``None`` for no tail variable."""

    var: Optional[int] = None
    kcoef: int = 0
    const: int = 0

    def shift(self, c: int) -> "Affine":
        return Affine(self.var, self.kcoef, self.const + c)

    def __str__(self) -> str:
        parts = []
        if self.var is not None:
            parts.append(f"x{self.var}")
        if self.kcoef:
            parts.append("k" if self.kcoef == 1 else f"{self.kcoef}*k")
        text = " + ".join(parts)
        if self.const or not text:
            if text:
                text += f" - {-self.const}" if self.const < 0 else f" + {self.const}"
            else:
                text = str(self.const)
        return text


@dataclass(frozen=True)
class SummationPlan:
    """Order and bounds of the tail sums for one transition.

    ``kept`` are the tail indices that survive into the shorter cluster,
    ``chopped`` the removed ones, both ascending.  Sums run over ``kept``
    (outermost first) and then ``chopped``.  For each chopped index ``upper_ref``
    is the next kept index above it, or ``None`` when the bound is in ``k``.
    """

    m: int
    kept: tuple[int, ...]
    chopped: tuple[int, ...]
    lower: dict
    upper: dict
    upper_ref: dict

    def order(self) -> tuple[int, ...]:
        return self.kept + self.chopped

    def check_bound_order(self) -> None:
        pos = {v: i for i, v in enumerate(self.order())}
        for v in self.order():
            for bound in (self.lower[v], self.upper[v]):
                if bound.var is not None and pos[bound.var] >= pos[v]:
                    raise AssertionError(f"bound of x{v} depends on inner x{bound.var}")

    def to_json(self) -> dict:
        return {
            "kept": list(self.kept),
            "chopped": list(self.chopped),
            "bounds": {
                str(v): [str(self.lower[v]), str(self.upper[v])] for v in self.order()
            },
        }


def summation_plan(tr: Transition) -> SummationPlan:
    m = len(tr.last)
    kept = tuple(sorted(x for _, x, _ in tr.determined))
    chopped = tuple(sorted(set(range(1, m + 1)) - set(kept)))
    lower, upper, upper_ref = {}, {}, {}
    for r, v in enumerate(kept):
        if r == 0:
            lower[v] = Affine(None, 0, v)
        else:
            lower[v] = Affine(kept[r - 1], 0, v - kept[r - 1])
        upper[v] = Affine(None, 1, v - m)
    for v in chopped:
        lower[v] = Affine(None, 0, 1) if v == 1 else Affine(v - 1, 0, 1)
        above = [b for b in kept if b > v]
        if above:
            b = above[0]
            upper[v] = Affine(b, 0, v - b)
            upper_ref[v] = b
        else:
            upper[v] = Affine(None, 1, v - m)
            upper_ref[v] = None
    plan = SummationPlan(m, kept, chopped, lower, upper, upper_ref)
    plan.check_bound_order()
    return plan


def _madd(a: ZMono, b: ZMono, times: int = 1) -> ZMono:
    return tuple(x + times * y for x, y in zip(a, b))


def geom_sum(M: ZMono, lower: Affine, upper: Affine):
    """``sum_{x=lower}^{upper} M^x = (M^lower - M^(upper+1)) / (1 - M)``.

    Returns ``[(+1, lower), (-1, upper + 1)]`` as exponent pieces of ``M``;
    the shared denominator factor is ``1 - M``.
    """
    if not any(M):
        raise DegenerateBase("geometric sum over the monomial 1")
    return [(1, lower), (-1, upper.shift(1))]


@dataclass(frozen=True)
class FETerm:
    """``sign * z^numerator / prod(1 - D) * F(k - k_shift, target; args)``.

    ``numerator`` holds one ``(const, kcoef)`` pair per variable, meaning
    exponent ``const + kcoef * k``; constants may be negative.  ``branch``
    records the geometric split taken at each eliminated index (``L`` for
    the lower-bound piece, ``H`` for the upper one), innermost first, and
    ``transition`` the index of the originating transition.
    """

    sign: int
    numerator: tuple[tuple[int, int], ...]
    denominators: tuple[ZMono, ...]
    k_shift: int
    target: Perm
    args: tuple[ZMono, ...]
    transition: int = 0
    branch: str = ""

    def numerator_at(self, k: int) -> ZMono:
        return tuple(a + b * k for a, b in self.numerator)

    def to_json(self) -> dict:
        return {
            "sign": self.sign,
            "numerator": [list(p) for p in self.numerator],
            "denominators": [list(d) for d in self.denominators],
            "k_shift": self.k_shift,
            "target": list(self.target),
            "args": [list(a) for a in self.args],
            "transition": self.transition,
            "branch": self.branch,
        }

    @classmethod
    def from_json(cls, d: dict) -> "FETerm":
        return cls(
            d["sign"],
            tuple(tuple(p) for p in d["numerator"]),
            tuple(tuple(x) for x in d["denominators"]),
            d["k_shift"],
            tuple(d["target"]),
            tuple(tuple(a) for a in d["args"]),
            d.get("transition", 0),
            d.get("branch", ""),
        )


@dataclass
class TailFE:
    B: PatternSet
    terms: dict[Perm, list[FETerm]] = field(default_factory=dict)
    plans: dict[Perm, list[SummationPlan]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "patterns": self.B.to_json(),
            "equations": [
                {
                    "pattern": list(p),
                    "base": {"k": len(p), "exponents": list(range(1, len(p) + 1))},
                    "terms": [t.to_json() for t in self.terms[p]],
                }
                for p in self.B
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TailFE":
        B = PatternSet(data["patterns"])
        fe = cls(B, {p: [] for p in B}, {})
        for eq in data["equations"]:
            fe.terms[tuple(eq["pattern"])] = [FETerm.from_json(t) for t in eq["terms"]]
        return fe

    def __eq__(self, other) -> bool:
        if not isinstance(other, TailFE):
            return NotImplemented
        return self.B == other.B and self.terms == other.terms

    def render(self, avoid: bool = False) -> str:
        return render_tail_fe(self, avoid)


def _terms_for_transition(tr: Transition, index: int) -> list[FETerm]:
    plan = summation_plan(tr)
    m = len(tr.last)
    zero = (0,) * m
    unit = [tuple(1 if i == v - 1 else 0 for i in range(m)) for v in range(1, m + 1)]
    # state: sign, numerator (const vec, k vec), denominators, monomial per live index, branch
    states = [(1, zero, zero, (), {v: unit[v - 1] for v in range(1, m + 1)}, "")]
    for v in reversed(plan.chopped):
        nxt = []
        for sign, nconst, nk, dens, mono, branch in states:
            M = mono[v]
            pieces = geom_sum(M, plan.lower[v], plan.upper[v])
            for (psign, expo), tag in zip(pieces, "LH"):
                mono2 = {w: mm for w, mm in mono.items() if w != v}
                c2 = _madd(nconst, M, expo.const)
                k2 = _madd(nk, M, expo.kcoef)
                if expo.var is not None:
                    mono2[expo.var] = _madd(mono2[expo.var], M)
                nxt.append((sign * psign, c2, k2, dens + (M,), mono2, branch + tag))
        states = nxt

    terms = []
    for sign, nconst, nk, dens, mono, branch in states:
        args = [(0,) * m] * len(tr.prev)
        for y, x, minus in tr.determined:
            N = mono[x]
            nconst = _madd(nconst, N, minus)
            args[y - 1] = N
        terms.append(
            FETerm(
                sign,
                tuple(zip(nconst, nk)),
                dens,
                tr.k_shift,
                tr.prev,
                tuple(args),
                index,
                branch,
            )
        )
    return terms


def build_tail_fe(B: PatternSet, scheme: Optional[ClusterScheme] = None) -> TailFE:
    scheme = scheme or build_scheme(B)
    fe = TailFE(B, {}, {})
    for p in B:
        fe.terms[p] = []
        fe.plans[p] = []
        for idx, tr in enumerate(scheme.for_pattern(p)):
            fe.plans[p].append(summation_plan(tr))
            fe.terms[p].extend(_terms_for_transition(tr, idx))
    return fe


# ---------------------------------------------------------------------------
# evaluation


def _div_one_minus(poly: dict[int, object], a: int) -> dict[int, object]:
    """Exact quotient of a sparse Laurent polynomial in ``u`` by ``1 - u^a``."""
    classes: dict[int, list[int]] = defaultdict(list)
    for e in poly:
        classes[e % a].append(e)
    out: dict[int, object] = {}
    for exps in classes.values():
        exps.sort()
        run = 0
        for i, e in enumerate(exps):
            run = run + poly[e]
            stop = exps[i + 1] if i + 1 < len(exps) else None
            if not run:
                continue
            if stop is None:
                raise NonDivisible("tail polynomial not divisible by 1 - u^a")
            for pos in range(e, stop, a):
                out[pos] = run
    return out


def _add_into(acc: dict, poly: dict, scale=1) -> None:
    for e, c in poly.items():
        v = acc.get(e)
        v = c * scale if v is None else v + c * scale
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)


class TailFEEvaluator:
    """Memoized explicit tail polynomials ``F(k, p)`` computed from the FE.

    ``F(k, p)`` is stored as ``{tail tuple: coefficient}`` with integer
    coefficients (avoidance, ``t = 0``) or ``TPoly`` (occurrence tracking).
    """

    def __init__(self, fe: TailFE, track_t: bool = False, kmax: int = 32):
        self.fe = fe
        self.track_t = track_t
        self.weight = weight_for(track_t)
        self.zero = TPoly() if track_t else 0
        self._reset(kmax)

    def _reset(self, kmax: int) -> None:
        self.kmax = kmax
        self.base = kmax + 1
        self.memo: dict[tuple[int, Perm], dict[tuple[int, ...], object]] = {}
        self.proj: dict[tuple, dict[tuple[int, ...], object]] = {}
        self._prep: dict[Perm, list] = {}

    def _ensure(self, k: int) -> None:
        if k > self.kmax:
            self._reset(max(k, 2 * self.kmax))

    def _prepared(self, p: Perm):
        """Per-term data at the generic point: determined slots and their exponents."""
        if p not in self._prep:
            m = len(p)
            g = [self.base ** i for i in range(m)]
            groups: dict[int, list] = defaultdict(list)
            for term in self.fe.terms[p]:
                slots = tuple(i + 1 for i, a in enumerate(term.args) if any(a))
                arg_exp = tuple(sum(x * y for x, y in zip(term.args[s - 1], g)) for s in slots)
                nc = sum(a * y for (a, _), y in zip(term.numerator, g))
                nk = sum(b * y for (_, b), y in zip(term.numerator, g))
                dens = tuple(sum(x * y for x, y in zip(d, g)) for d in term.denominators)
                groups[term.transition].append((term, slots, arg_exp, nc, nk, dens))
            self._prep[p] = list(groups.values())
        return self._prep[p]

    def F(self, k: int, p: Perm) -> dict[tuple[int, ...], object]:
        self._ensure(k)
        key = (k, p)
        if key in self.memo:
            return self.memo[key]
        m = len(p)
        if k < m:
            val = {}
        elif k == m:
            val = {tuple(range(1, m + 1)): self.weight}
        else:
            acc: dict[int, object] = {}
            for group in self._prepared(p):
                root = self._transition_value(k, group)
                if root:
                    _add_into(acc, root)
            val = self._decode(acc, k, m)
            if self.track_t:
                val = {x: self.weight * c for x, c in val.items()}
            else:
                val = {x: -c for x, c in val.items()}
        self.memo[key] = val
        return val

    def _projection(self, k: int, p: Perm, slots: tuple[int, ...]):
        key = (k, p, slots)
        if key not in self.proj:
            out: dict[tuple[int, ...], object] = {}
            for x, c in self.F(k, p).items():
                y = tuple(x[s - 1] for s in slots)
                v = out.get(y)
                out[y] = c if v is None else v + c
            self.proj[key] = {y: c for y, c in out.items() if c}
        return self.proj[key]

    def _transition_value(self, k: int, group) -> dict[int, object]:
        nodes: dict[str, dict[int, object]] = {}
        depth = 0
        for term, slots, arg_exp, nc, nk, dens in group:
            depth = len(term.branch)
            proj = self._projection(k - term.k_shift, term.target, slots)
            if not proj:
                continue
            shift = nc + nk * k
            leaf: dict[int, object] = {}
            for y, c in proj.items():
                e = shift + sum(a * b for a, b in zip(arg_exp, y))
                v = leaf.get(e)
                leaf[e] = c if v is None else v + c
            if term.sign < 0:
                leaf = {e: -c for e, c in leaf.items()}
            nodes[term.branch] = leaf
        if not nodes:
            return {}
        dens_by_prefix = {}
        for term, _, _, _, _, dens in group:
            for i in range(len(term.branch)):
                dens_by_prefix[term.branch[:i]] = dens[i]
        for d in range(depth - 1, -1, -1):
            merged: dict[str, dict[int, object]] = {}
            for branch, poly in nodes.items():
                parent = branch[:d]
                if parent in merged:
                    _add_into(merged[parent], poly)
                else:
                    merged[parent] = dict(poly)
            nodes = {
                prefix: _div_one_minus(poly, dens_by_prefix[prefix])
                for prefix, poly in merged.items()
                if poly
            }
            if not nodes:
                return {}
        return nodes.get("", {})

    def _decode(self, acc: dict[int, object], k: int, m: int) -> dict[tuple[int, ...], object]:
        out = {}
        base = self.base
        for e, c in acc.items():
            if e < 0:
                raise NonDivisible(f"negative exponent {e} in a tail polynomial")
            digits = []
            rest = e
            for _ in range(m):
                rest, d = divmod(rest, base)
                digits.append(d)
            x = tuple(digits)
            if rest or x[0] < 1 or x[-1] > k or any(a >= b for a, b in zip(x, x[1:])):
                raise NonDivisible(f"exponent {e} does not encode a tail of length {k}")
            out[x] = c
        return out

    def C_of_p(self, k: int, p: Perm):
        total = self.zero
        for c in self.F(k, p).values():
            total = total + c
        return total

    def C(self, k: int):
        total = self.zero
        for p in self.fe.B:
            total = total + self.C_of_p(k, p)
        return total


def _substitute(poly: dict[tuple[int, ...], object], exps: Sequence[int]) -> UPoly:
    deg: dict[int, object] = {}
    for x, c in poly.items():
        e = sum(a * b for a, b in zip(x, exps))
        deg[e] = deg.get(e, 0) + c
    top = max(deg) if deg else -1
    return UPoly([deg.get(i, 0) for i in range(top + 1)])


def eval_F(fe: TailFE, k: int, p: Perm, u_exponents: Sequence[int],
           track_t: bool = True, evaluator: Optional[TailFEEvaluator] = None) -> URat:
    """``F(k, p; [u^e1, ..., u^em])`` as an exact rational function (a polynomial)."""
    ev = evaluator or TailFEEvaluator(fe, track_t, kmax=max(k, 2))
    return URat(_substitute(ev.F(k, tuple(p)), u_exponents))


def _u_power(e: int) -> URat:
    if e >= 0:
        return URat(UPoly.monomial(1, e))
    return URat(ONE_U, UPoly.monomial(1, -e))


def eval_F_rhs(fe: TailFE, k: int, p: Perm, u_exponents: Sequence[int],
               track_t: bool = True, evaluator: Optional[TailFEEvaluator] = None) -> URat:
    """Right-hand side of the functional equation at ``z_j = u^e_j``, summed
    term by term as rational functions.  Every denominator must be nonconstant
    at the chosen point (true whenever all exponents are positive)."""
    p = tuple(p)
    ev = evaluator or TailFEEvaluator(fe, track_t, kmax=max(k, 2))
    m = len(p)
    if k <= m:
        return eval_F(fe, k, p, u_exponents, track_t, ev)
    total = URat(0)
    for term in fe.terms[p]:
        inner = ev.F(k - term.k_shift, term.target)
        if not inner:
            continue
        arg_exps = [sum(a * b for a, b in zip(arg, u_exponents)) for arg in term.args]
        value = URat(_substitute(inner, arg_exps)) * _u_power(
            sum(a * b for a, b in zip(term.numerator_at(k), u_exponents))
        )
        for D in term.denominators:
            d = sum(a * b for a, b in zip(D, u_exponents))
            if d == 0:
                raise DegenerateBase("denominator vanishes at this evaluation point")
            value = value / URat(ONE_U - UPoly.monomial(1, d))
        total = total + (value if term.sign > 0 else -value)
    return total * URat(ev.weight)


def C_of_k_fast(fe: TailFE, k: int, track_t: bool = True,
                evaluator: Optional[TailFEEvaluator] = None) -> TPoly:
    ev = evaluator or TailFEEvaluator(fe, track_t, kmax=max(k, 2))
    total = TPoly()
    for p in fe.B:
        value = eval_F(fe, k, p, [0] * len(p), track_t, ev)
        total = total + upoly_eval_u1(urat_to_poly(value))
    return total


def alpha_fast(B: PatternSet, n: int, track_t: bool = False,
               fe: Optional[TailFE] = None) -> AlphaSequence:
    ev = TailFEEvaluator(fe or build_tail_fe(B), track_t, kmax=max(n, 2))
    return master_recurrence(ev.C, n, track_t)


# ---------------------------------------------------------------------------
# rendering


def _mono_str(exps, var: str = "z") -> str:
    parts = []
    for i, e in enumerate(exps, start=1):
        if isinstance(e, tuple):
            const, kc = e
            if not const and not kc:
                continue
            if kc == 0:
                expo = str(const)
            else:
                expo = "k" if kc == 1 else f"{kc}k"
                if const:
                    expo += f"{const:+d}"
            parts.append(f"{var}{i}" if expo == "1" else f"{var}{i}^({expo})" if kc else f"{var}{i}^{expo}")
        elif e:
            parts.append(f"{var}{i}" if e == 1 else f"{var}{i}^{e}")
    return "*".join(parts) if parts else "1"


def render_term(term: FETerm, avoid: bool = False, single: bool = True) -> str:
    sign = -term.sign if avoid else term.sign
    num = _mono_str(term.numerator)
    den = "*".join(f"(1-{_mono_str(d)})" for d in term.denominators)
    coeff = f"{num}/({den})" if den else num
    args = ", ".join(_mono_str(a) for a in term.args)
    fname = f"F(k-{term.k_shift};[{args}])" if single else \
        f"F(k-{term.k_shift},{fmt_perm(term.target)};[{args}])"
    return f"{'-' if sign < 0 else '+'} {coeff} * {fname}"


def render_tail_fe(fe: TailFE, avoid: bool = False) -> str:
    single = len(fe.B) == 1
    lines = []
    for p in fe.B:
        m = len(p)
        zs = ", ".join(f"z{i}" for i in range(1, m + 1))
        head = f"F(k;[{zs}])" if single else f"F(k,{fmt_perm(p)};[{zs}])"
        base = _mono_str(range(1, m + 1))
        w = "-1" if avoid else "(t-1)"
        lines.append(f"{head} = {w}*{base}  for k = {m};  0 for k < {m}")
        lines.append(f"{head} =" + ("" if avoid else " (t-1) * (") + f"  for k > {m}")
        for term in fe.terms[p]:
            lines.append("    " + render_term(term, avoid, single))
        if not avoid:
            lines.append("  )")
    return "\n".join(lines)
