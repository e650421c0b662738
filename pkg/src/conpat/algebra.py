"""Exact polynomial arithmetic.

``TPoly`` is a dense polynomial in the occurrence variable ``t`` with integer
coefficients.  ``UPoly`` is a dense polynomial in a formal variable ``u``
whose coefficients are ``TPoly`` values, and ``URat`` is a quotient of two
``UPoly`` kept in a canonical reduced form so that equality is structural.

All three are immutable and hashable.
"""

from __future__ import annotations

import math
from functools import reduce
from typing import Iterable, Sequence, Union

from conpat.errors import NonDivisible

IntLike = Union[int, "TPoly"]


def _strip(seq: Iterable) -> tuple:
    out = list(seq)
    while out and not out[-1]:
        out.pop()
    return tuple(out)


class TPoly:
    """Polynomial in ``t`` over the integers, ascending coefficient order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        self.coeffs = _strip(int(c) for c in coeffs)

    @classmethod
    def coerce(cls, value: IntLike) -> "TPoly":
        if isinstance(value, TPoly):
            return value
        return cls((value,))

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, TPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _strip((other,))
        return NotImplemented

    def __hash__(self) -> int:
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0] if self.coeffs else 0)
        return hash(self.coeffs)

    def __neg__(self) -> "TPoly":
        return TPoly(-c for c in self.coeffs)

    def __add__(self, other: IntLike) -> "TPoly":
        if isinstance(other, int):
            if not other:
                return self
            if not self.coeffs:
                return TPoly((other,))
            return TPoly((self.coeffs[0] + other,) + self.coeffs[1:])
        if not isinstance(other, TPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return TPoly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __sub__(self, other: IntLike) -> "TPoly":
        if isinstance(other, (int, TPoly)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: IntLike) -> "TPoly":
        return (-self) + other

    def __mul__(self, other: IntLike) -> "TPoly":
        if isinstance(other, int):
            if not other:
                return ZERO_T
            return TPoly(c * other for c in self.coeffs)
        if not isinstance(other, TPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO_T
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return TPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "TPoly":
        result = ONE_T
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, t0: int) -> int:
        return tpoly_eval(self, t0)

    def content(self) -> int:
        return reduce(math.gcd, self.coeffs, 0)

    def exact_div(self, other: IntLike) -> "TPoly":
        """Quotient ``self / other``; raises ``NonDivisible`` on a remainder."""
        if isinstance(other, int):
            if other == 0:
                raise ZeroDivisionError("division by the zero polynomial")
            q = []
            for c in self.coeffs:
                d, r = divmod(c, other)
                if r:
                    raise NonDivisible(f"{self} is not divisible by {other}")
                q.append(d)
            return TPoly(q)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        db = other.degree
        lb = other.lead()
        if len(rem) - 1 < db:
            if rem:
                raise NonDivisible(f"{self} is not divisible by {other}")
            return ZERO_T
        q = [0] * (len(rem) - db)
        for shift in range(len(rem) - 1 - db, -1, -1):
            c = rem[shift + db]
            if not c:
                continue
            d, r = divmod(c, lb)
            if r:
                raise NonDivisible(f"{self} is not divisible by {other}")
            q[shift] = d
            for i, b in enumerate(other.coeffs):
                rem[shift + i] -= d * b
        if any(rem):
            raise NonDivisible(f"{self} is not divisible by {other}")
        return TPoly(q)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "TPoly":
        return cls(int(c) for c in data)

    def __repr__(self) -> str:
        return f"TPoly({list(self.coeffs)!r})"

    def __str__(self) -> str:
        return format_poly(self.coeffs, "t")


ZERO_T = TPoly()
ONE_T = TPoly((1,))
T = TPoly((0, 1))


def format_poly(coeffs: Sequence[int], var: str) -> str:
    if not any(coeffs):
        return "0"
    parts = []
    for e, c in enumerate(coeffs):
        if not c:
            continue
        if e == 0:
            mono = str(abs(c))
        else:
            power = var if e == 1 else f"{var}^{e}"
            mono = power if abs(c) == 1 else f"{abs(c)}*{power}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, mono))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, mono in parts[1:]:
        text += f" {sign} {mono}"
    return text


def tpoly_arith(a: IntLike, b: IntLike, op: str) -> TPoly:
    a, b = TPoly.coerce(a), TPoly.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def tpoly_eval(p: IntLike, t0: int) -> int:
    if isinstance(p, int):
        return p
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * t0 + c
    return acc


def _tpoly_prem(a: TPoly, b: TPoly) -> TPoly:
    rem = list(a.coeffs)
    db, lb = b.degree, b.lead()
    steps = len(rem) - db
    while len(rem) - 1 >= db and rem:
        lr = rem[-1]
        shift = len(rem) - 1 - db
        rem = [c * lb for c in rem]
        for i, c in enumerate(b.coeffs):
            rem[shift + i] -= lr * c
        rem = list(_strip(rem))
        steps -= 1
    return TPoly(c * lb ** max(steps, 0) for c in rem)


def _tpoly_primitive(p: TPoly) -> TPoly:
    c = p.content()
    if c == 0:
        return p
    if p.lead() < 0:
        c = -c
    return p.exact_div(c)


def tpoly_gcd(a: IntLike, b: IntLike) -> TPoly:
    """Greatest common divisor in Z[t], normalized to a positive leading coefficient."""
    a, b = TPoly.coerce(a), TPoly.coerce(b)
    if not a:
        return _tpoly_primitive(b) * abs(b.content()) if b else ZERO_T
    if not b:
        return _tpoly_primitive(a) * abs(a.content())
    c = math.gcd(a.content(), b.content())
    a, b = _tpoly_primitive(a), _tpoly_primitive(b)
    if a.degree < b.degree:
        a, b = b, a
    while b:
        r = _tpoly_prem(a, b)
        a, b = b, (_tpoly_primitive(r) if r else ZERO_T)
    return _tpoly_primitive(a) * c


class UPoly:
    """Polynomial in ``u`` with ``TPoly`` coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[IntLike] = ()):
        self.coeffs = _strip(TPoly.coerce(c) for c in coeffs)

    @classmethod
    def monomial(cls, coeff: IntLike, exponent: int) -> "UPoly":
        return cls([0] * exponent + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lead(self) -> TPoly:
        return self.coeffs[-1] if self.coeffs else ZERO_T

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, i: int) -> TPoly:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else ZERO_T

    def __eq__(self, other) -> bool:
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, TPoly)):
            return self == UPoly((other,))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __neg__(self) -> "UPoly":
        return UPoly(-c for c in self.coeffs)

    def __add__(self, other) -> "UPoly":
        if isinstance(other, (int, TPoly)):
            other = UPoly((other,))
        if not isinstance(other, UPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UPoly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __sub__(self, other) -> "UPoly":
        if isinstance(other, (int, TPoly)):
            other = UPoly((other,))
        if not isinstance(other, UPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "UPoly":
        return (-self) + other

    def __mul__(self, other) -> "UPoly":
        if isinstance(other, (int, TPoly)):
            return UPoly(c * other for c in self.coeffs)
        if not isinstance(other, UPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO_U
        out = [ZERO_T] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = out[i + j] + x * y
        return UPoly(out)

    __rmul__ = __mul__

    def content(self) -> TPoly:
        return reduce(tpoly_gcd, self.coeffs, ZERO_T)

    def coeff_div(self, c: IntLike) -> "UPoly":
        return UPoly(x.exact_div(c) for x in self.coeffs)

    def exact_div(self, other: "UPoly") -> "UPoly":
        """Quotient ``self / other`` in Z[t][u]; ``NonDivisible`` otherwise."""
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        db, lb = other.degree, other.lead()
        if len(rem) - 1 < db:
            if rem:
                raise NonDivisible("numerator degree below denominator degree")
            return ZERO_U
        q = [ZERO_T] * (len(rem) - db)
        for shift in range(len(rem) - 1 - db, -1, -1):
            c = rem[shift + db]
            if not c:
                continue
            d = c.exact_div(lb)
            q[shift] = d
            for i, b in enumerate(other.coeffs):
                if b:
                    rem[shift + i] = rem[shift + i] - d * b
        if any(rem):
            raise NonDivisible("polynomial division leaves a remainder")
        return UPoly(q)

    def eval_u1(self) -> TPoly:
        return upoly_eval_u1(self)

    def to_json(self) -> list[list[str]]:
        return [c.to_json() for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "UPoly":
        return cls(TPoly.from_json(c) for c in data)

    def __repr__(self) -> str:
        return f"UPoly({[list(c.coeffs) for c in self.coeffs]!r})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in enumerate(self.coeffs):
            if not c:
                continue
            power = "" if e == 0 else ("u" if e == 1 else f"u^{e}")
            if not power:
                parts.append(f"({c})" if len(c) > 1 else str(c))
            elif c == 1:
                parts.append(power)
            else:
                parts.append(f"({c})*{power}")
        return " + ".join(parts)


ZERO_U = UPoly()
ONE_U = UPoly((1,))
U = UPoly((0, 1))


def _upoly_prem(a: UPoly, b: UPoly) -> UPoly:
    rem = list(a.coeffs)
    db, lb = b.degree, b.lead()
    steps = len(rem) - db
    while rem and len(rem) - 1 >= db:
        lr = rem[-1]
        shift = len(rem) - 1 - db
        rem = [c * lb for c in rem]
        for i, c in enumerate(b.coeffs):
            rem[shift + i] = rem[shift + i] - lr * c
        rem = list(_strip(rem))
        steps -= 1
    return UPoly(rem) * (lb ** max(steps, 0))


def _upoly_normalize_sign(p: UPoly) -> UPoly:
    return -p if p and p.lead().lead() < 0 else p


def _upoly_primitive(p: UPoly) -> UPoly:
    if not p:
        return p
    return _upoly_normalize_sign(p.coeff_div(p.content()))


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    """GCD in Z[t][u] by the primitive remainder sequence."""
    if not a:
        return _upoly_normalize_sign(b)
    if not b:
        return _upoly_normalize_sign(a)
    c = tpoly_gcd(a.content(), b.content())
    a, b = _upoly_primitive(a), _upoly_primitive(b)
    if a.degree < b.degree:
        a, b = b, a
    while b:
        r = _upoly_prem(a, b)
        a, b = b, _upoly_primitive(r)
    return _upoly_primitive(a) * c


class URat:
    """Rational function in ``u`` with ``TPoly`` coefficients.

    The stored pair is reduced by its GCD and the denominator's leading
    coefficient has a positive leading integer, so ``==`` compares values.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, UPoly) else UPoly((num,))
        if den is None:
            den = ONE_U
        elif not isinstance(den, UPoly):
            den = UPoly((den,))
        if not den:
            raise ZeroDivisionError("URat with zero denominator")
        if not num:
            self.num, self.den = ZERO_U, ONE_U
            return
        if den != ONE_U:
            g = upoly_gcd(num, den)
            if g != ONE_U:
                num, den = num.exact_div(g), den.exact_div(g)
            if den.lead().lead() < 0:
                num, den = -num, -den
        self.num, self.den = num, den

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, TPoly, UPoly)):
            other = URat(other)
        if not isinstance(other, URat):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __neg__(self) -> "URat":
        return URat(-self.num, self.den)

    def __add__(self, other) -> "URat":
        if isinstance(other, (int, TPoly, UPoly)):
            other = URat(other)
        if not isinstance(other, URat):
            return NotImplemented
        if self.den == other.den:
            return URat(self.num + other.num, self.den)
        return URat(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "URat":
        return self + (-URat(other) if not isinstance(other, URat) else -other)

    def __mul__(self, other) -> "URat":
        if isinstance(other, (int, TPoly, UPoly)):
            other = URat(other)
        if not isinstance(other, URat):
            return NotImplemented
        return URat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "URat":
        if isinstance(other, (int, TPoly, UPoly)):
            other = URat(other)
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return URat(self.num * other.den, self.den * other.num)

    def is_poly(self) -> bool:
        return self.den == ONE_U

    def __repr__(self) -> str:
        return f"URat({self.num!r}, {self.den!r})"

    def __str__(self) -> str:
        if self.is_poly():
            return str(self.num)
        return f"({self.num}) / ({self.den})"


def urat_arith(a: URat, b: URat, op: str) -> URat:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def urat_to_poly(a: URat) -> UPoly:
    """Return ``a`` as a polynomial; raises ``NonDivisible`` if it is not one."""
    if a.is_poly():
        return a.num
    return a.num.exact_div(a.den)


def upoly_eval_u1(p: UPoly) -> TPoly:
    return reduce(lambda x, y: x + y, p.coeffs, ZERO_T)
