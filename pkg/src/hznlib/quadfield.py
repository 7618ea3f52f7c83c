"""Exact reduction theory for real quadratic fields.

Quadratic irrationals are kept as (P + sqrt(D)) / Q with integers P, Q and the
discriminant D fixed; every comparison is decided by integer sign tests, so
periodicity is detected bit-exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

import numpy as np

from .errors import (DegenerateCycle, NonRationalInput, NotFundamentalDiscriminant,
                     NotReduced)
from .values import TwistPair, UnitPhase, as_twist


def _sign_surd(a: int, b: int, D: int) -> int:
    """Sign of a + b sqrt(D) (D > 0 non-square)."""
    if a >= 0 and b >= 0:
        return 0 if a == 0 and b == 0 else 1
    if a <= 0 and b <= 0:
        return -1
    # opposite signs: compare a^2 with b^2 D
    lhs, rhs = a * a, b * b * D
    if a > 0:
        return 1 if lhs > rhs else -1
    return 1 if rhs > lhs else -1


def _squarefree_part(n: int) -> Tuple[int, int]:
    """n = f^2 d with d squarefree; returns (f, d)."""
    f, d, p = 1, 1, 2
    m = n
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        f *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1
    return f, d * m


@dataclass(frozen=True, order=True)
class QuadIrr:
    """(P + sqrt(D)) / Q."""

    P: int
    Q: int
    D: int

    def __post_init__(self):
        if self.Q == 0:
            raise ValueError("Q must be non-zero")
        r = math.isqrt(self.D)
        if self.D <= 0 or r * r == self.D:
            raise ValueError("D must be a positive non-square")
        if (self.D - self.P * self.P) % self.Q:
            raise ValueError("Q must divide D - P^2")

    @property
    def value(self) -> float:
        return (self.P + math.sqrt(self.D)) / self.Q

    @property
    def conj(self) -> float:
        # avoid cancellation: (P - s)/Q = (P^2 - D) / (Q (P + s))
        s = math.sqrt(self.D)
        if self.P > 0:
            return (self.P * self.P - self.D) / (self.Q * (self.P + s))
        return (self.P - s) / self.Q

    def cmp_int(self, n: int, conjugate: bool = False) -> int:
        """Sign of (this or its conjugate) - n."""
        b = -1 if conjugate else 1
        s = _sign_surd(self.P - n * self.Q, b, self.D)
        return s if self.Q > 0 else -s

    def floor(self) -> int:
        n = math.floor(self.value)
        while self.cmp_int(n) < 0:
            n -= 1
        while self.cmp_int(n + 1) > 0:
            n += 1
        return n

    def is_reduced(self) -> bool:
        """w > 1 > w' > 0."""
        return self.cmp_int(1) > 0 and self.cmp_int(1, True) < 0 and self.cmp_int(0, True) > 0

    def is_wide_reduced(self) -> bool:
        """x > 1, -1 < x' < 0."""
        return self.cmp_int(1) > 0 and self.cmp_int(0, True) < 0 and self.cmp_int(-1, True) > 0

    def minus_step(self) -> Tuple[int, "QuadIrr"]:
        """w = b - 1/w_next with b = ceil(w)."""
        b = self.floor() + 1
        P2 = b * self.Q - self.P
        return b, QuadIrr(P2, (P2 * P2 - self.D) // self.Q, self.D)

    def plus_step(self) -> Tuple[int, "QuadIrr"]:
        """x = a + 1/x_next with a = floor(x)."""
        a = self.floor()
        P2 = a * self.Q - self.P
        return a, QuadIrr(P2, (self.D - P2 * P2) // self.Q, self.D)

    def shift(self, n: int) -> "QuadIrr":
        return QuadIrr(self.P + n * self.Q, self.Q, self.D)

    def pretty(self) -> str:
        f, d = _squarefree_part(self.D)
        g = math.gcd(math.gcd(abs(self.P), f), abs(self.Q))
        P, f, Q = self.P // g, f // g, self.Q // g
        if Q < 0:
            P, f, Q = -P, -f, -Q
        rad = (f"{f}*" if abs(f) != 1 else ("-" if f < 0 else "")) + f"sqrt({d})"
        num = f"{P}+{rad}" if P else rad
        num = num.replace("+-", "-")
        return num if Q == 1 else f"({num})/{Q}"

    def to_dict(self) -> dict:
        return {"P": self.P, "Q": self.Q, "D": self.D, "text": self.pretty()}


@dataclass(frozen=True)
class MinusCycle:
    """Digits ((b_1..b_r)) in canonical (lexicographically minimal) rotation, plus the reduced numbers."""

    digits: Tuple[int, ...]
    reds: Tuple[QuadIrr, ...] = field(compare=False)

    def __post_init__(self):
        if not self.digits or any(b < 2 for b in self.digits):
            raise ValueError("digits must be >= 2")
        if all(b == 2 for b in self.digits):
            raise ValueError("all-2 cycle is degenerate")

    @property
    def length(self) -> int:
        return len(self.digits)

    def to_dict(self) -> dict:
        return {"digits": list(self.digits), "reds": [w.to_dict() for w in self.reds]}


@dataclass(frozen=True)
class IndefForm:
    """Q(x, y) = (y + x w)(y + x w') / (w - w'), discriminant 1."""

    w: float
    wprime: float
    exact: QuadIrr | None = None

    def __post_init__(self):
        if not (self.w > 1 and 0 < self.wprime < self.w):
            raise NotReduced("need w > 1 and 0 < w' < w")

    @classmethod
    def of(cls, w: QuadIrr) -> "IndefForm":
        return cls(w.value, w.conj, w)

    @property
    def coefficients(self) -> Tuple[float, float, float]:
        d = self.w - self.wprime
        return self.w * self.wprime / d, (self.w + self.wprime) / d, 1.0 / d

    def __call__(self, x, y):
        return (y + x * self.w) * (y + x * self.wprime) / (self.w - self.wprime)

    @property
    def discriminant(self) -> float:
        a, b, c = self.coefficients
        return b * b - 4 * a * c

    def to_dict(self) -> dict:
        a, b, c = self.coefficients
        out = {"w": self.w, "wprime": self.wprime, "a": a, "b": b, "c": c}
        if self.exact is not None:
            out["exact"] = self.exact.to_dict()
        return out


@dataclass(frozen=True)
class FieldData:
    """epsilon = (eps_a + eps_b sqrt(D)) / 2."""

    D: int
    eps_a: int
    eps_b: int
    norm_eps: int
    norm_eps_minus_1: int

    @property
    def epsilon(self) -> float:
        return (self.eps_a + self.eps_b * math.sqrt(self.D)) / 2

    def to_dict(self) -> dict:
        return {"D": self.D, "epsilon": [self.eps_a, self.eps_b], "epsilon_value": self.epsilon,
                "norm_eps": self.norm_eps, "norm_eps_minus_1": self.norm_eps_minus_1}


# ---------------------------------------------------------------- units

def is_fundamental_discriminant(D: int) -> bool:
    if D <= 1 or math.isqrt(D) ** 2 == D:
        return False
    if D % 4 == 1:
        return _squarefree_part(D)[0] == 1
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree_part(m)[0] == 1
    return False


def _omega0(D: int) -> QuadIrr:
    """(b0 + sqrt D)/2 with b0 the largest integer < sqrt D of D's parity (wide reduced)."""
    b0 = math.isqrt(D)
    if (b0 - D) % 2:
        b0 -= 1
    return QuadIrr(b0, 2, D)


def _plus_cycle(x: QuadIrr, limit: int = 1_000_000) -> Tuple[List[int], List[QuadIrr]]:
    digits, xs = [], []
    cur = x
    for _ in range(limit):
        a, nxt = cur.plus_step()
        digits.append(a)
        xs.append(cur)
        cur = nxt
        if cur == x:
            return digits, xs
    raise DegenerateCycle("plus continued fraction did not close")


def fundamental_unit(D: int) -> FieldData:
    """Smallest unit > 1 of the maximal order of Q(sqrt D)."""
    if not is_fundamental_discriminant(D):
        raise NotFundamentalDiscriminant(f"{D} is not a fundamental discriminant")
    _, xs = _plus_cycle(_omega0(D))
    # product of complete quotients (P_i + sqrt D)/Q_i, kept as a + b sqrt D
    a, b = Fraction(1), Fraction(0)
    for x in xs:
        a, b = (a * x.P + b * D) / x.Q, (a + b * x.P) / x.Q
    A, B = 2 * a, 2 * b
    if A.denominator != 1 or B.denominator != 1:
        raise DegenerateCycle("unit is not integral")
    A, B = int(A), int(B)
    norm = (A * A - B * B * D) // 4
    if abs(norm) != 1:
        raise DegenerateCycle("unit norm is not +-1")
    # N(eps - 1) = (A/2 - 1)^2 - D B^2 / 4
    nm1 = ((A - 2) ** 2 - D * B * B) // 4
    return FieldData(D, A, B, norm, nm1)


# ---------------------------------------------------------------- classes

def minus_cf(w: QuadIrr, limit: int = 1_000_000) -> MinusCycle:
    """Purely periodic minus continued fraction of a reduced w."""
    if not w.is_reduced():
        raise NotReduced(f"{w.pretty()} is not reduced")
    digits, reds = [], []
    cur = w
    for _ in range(limit):
        b, nxt = cur.minus_step()
        digits.append(b)
        reds.append(cur)
        cur = nxt
        if cur == w:
            return _canonical(digits, reds)
    raise DegenerateCycle("minus continued fraction did not close")


def _canonical(digits: List[int], reds: List[QuadIrr]) -> MinusCycle:
    r = len(digits)
    best = min(range(r), key=lambda i: (tuple(digits[i:] + digits[:i]), reds[i]))
    return MinusCycle(tuple(digits[best:] + digits[:best]), tuple(reds[best:] + reds[:best]))


def reduced_numbers(D: int) -> List[QuadIrr]:
    """All reduced (P + sqrt D)/Q whose lattice Z w + Z is a primitive ideal of the maximal order."""
    s = math.isqrt(D)
    out = []
    for d in range(-s, s + 1):
        n = D - d * d
        if n <= 0:
            continue
        for Q in _divisors(n):
            P = Q + d
            if P <= s or Q % 2 or ((P * P - D) // Q) % 2:
                continue
            a, b, c = Q // 2, P, (P * P - D) // (2 * Q)
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            w = QuadIrr(P, Q, D)
            if w.is_reduced():
                out.append(w)
    return sorted(set(out))


def _divisors(n: int) -> List[int]:
    small = [i for i in range(1, math.isqrt(n) + 1) if n % i == 0]
    return sorted(set(small + [n // i for i in small]))


def narrow_classes(fd: FieldData) -> List[MinusCycle]:
    """One minus-CF cycle per narrow class; the principal class comes first."""
    D = fd.D
    pool = set(reduced_numbers(D))
    cycles = []
    while pool:
        w = min(pool)
        cyc = minus_cf(w)
        cycles.append(cyc)
        pool -= set(cyc.reds)
    principal = _omega0(D).shift(1)
    cycles.sort(key=lambda c: (principal not in c.reds, c.digits))
    return cycles


def red_set(cycle: MinusCycle, fd: FieldData | None = None) -> List[QuadIrr]:
    return list(cycle.reds)


def forms_of(reds) -> List[IndefForm]:
    return [IndefForm.of(w) for w in reds]


def wide_red_sets(fd: FieldData, cycle: MinusCycle) -> Tuple[List[QuadIrr], List[QuadIrr]]:
    """(Red_w(B), Red_w(B*)) from the plus-CF cycle of x_1 = w - 1, digit(w) >= 3."""
    start = next(w for b, w in zip(cycle.digits, cycle.reds) if b >= 3)
    x1 = start.shift(-1)
    if not x1.is_wide_reduced():
        raise DegenerateCycle("w - 1 is not reduced in the wide sense")
    _, xs = _plus_cycle(x1)
    if len(xs) % 2:
        raise DegenerateCycle("odd plus period: B and B* are not separated")
    return xs[0::2], xs[1::2]


def class_index(cycles: List[MinusCycle], x: QuadIrr) -> int:
    """Index of the class whose wide set (first component) contains x."""
    for i, c in enumerate(cycles):
        if any(w.shift(-1) == x for b, w in zip(c.digits, c.reds) if b >= 3):
            return i
    raise KeyError(x)


def in_set_S(t, fd: FieldData) -> bool:
    """N(eps - 1)(alpha, beta) in Z^2."""
    t = as_twist(t)
    if t.alpha.exact is None or t.beta.exact is None:
        raise NonRationalInput("twists must be exact rationals")
    n = fd.norm_eps_minus_1
    return (n * t.alpha.exact).denominator == 1 and (n * t.beta.exact).denominator == 1


def field_report(D: int) -> Dict:
    """Everything the reduce command prints."""
    fd = fundamental_unit(D)
    cycles = narrow_classes(fd)
    classes = []
    for i, c in enumerate(cycles):
        entry = {"class_id": i, "cycle": list(c.digits),
                 "red": [w.to_dict() for w in c.reds],
                 "forms": [f.to_dict() for f in forms_of(c.reds)]}
        if fd.norm_eps == 1:
            try:
                rw, rws = wide_red_sets(fd, c)
                entry["red_wide"] = [x.to_dict() for x in rw]
                entry["red_wide_star"] = [x.to_dict() for x in rws]
            except DegenerateCycle as e:
                entry["red_wide_error"] = str(e)
        classes.append(entry)
    return {"field": fd.to_dict(), "class_count": len(cycles), "classes": classes}
