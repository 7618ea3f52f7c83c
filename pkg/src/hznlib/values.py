"""Small value types shared across modules."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

INTEGRAL_TOL = 1e-12


@dataclass(frozen=True)
class ComplexValue:
    """A complex number with an absolute-error estimate (heuristic, not a bound)."""

    value: complex
    err: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        object.__setattr__(self, "err", float(abs(self.err)))

    def __complex__(self):
        return self.value

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag

    def __abs__(self):
        return abs(self.value)

    def conjugate(self) -> "ComplexValue":
        return ComplexValue(self.value.conjugate(), self.err)

    def __neg__(self):
        return ComplexValue(-self.value, self.err)

    def __add__(self, other):
        o = as_value(other)
        return ComplexValue(self.value + o.value, self.err + o.err)

    __radd__ = __add__

    def __sub__(self, other):
        o = as_value(other)
        return ComplexValue(self.value - o.value, self.err + o.err)

    def __rsub__(self, other):
        return as_value(other) - self

    def __mul__(self, other):
        o = as_value(other)
        return ComplexValue(self.value * o.value,
                            abs(self.value) * o.err + abs(o.value) * self.err)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = as_value(other)
        v = self.value / o.value
        return ComplexValue(v, (self.err + abs(v) * o.err) / abs(o.value))


Number = Union[int, float, complex, ComplexValue]


def as_value(x) -> ComplexValue:
    return x if isinstance(x, ComplexValue) else ComplexValue(complex(x), 0.0)


def as_complex(x) -> complex:
    return x.value if isinstance(x, ComplexValue) else complex(x)


def _exact(a) -> Optional[Fraction]:
    if isinstance(a, Fraction):
        return a
    if isinstance(a, int) and not isinstance(a, bool):
        return Fraction(a)
    if isinstance(a, str):
        return Fraction(a.strip())
    return None


@dataclass(frozen=True)
class UnitPhase:
    """e^{2 pi i alpha}; alpha kept mod 1 (plus the exact rational when known)."""

    alpha: float
    exact: Optional[Fraction] = None
    is_integral: bool = field(init=False)

    def __post_init__(self):
        ex = self.exact
        if ex is not None:
            ex = ex - math.floor(ex)
            object.__setattr__(self, "exact", ex)
            a = float(ex)
        else:
            a = float(self.alpha) % 1.0
            if a >= 1.0:
                a = 0.0
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "is_integral", min(a, 1.0 - a) < INTEGRAL_TOL)

    @classmethod
    def of(cls, a) -> "UnitPhase":
        if isinstance(a, UnitPhase):
            return a
        ex = _exact(a)
        if ex is not None:
            return cls(float(ex), ex)
        return cls(float(a))

    @property
    def z(self) -> ComplexValue:
        return ComplexValue(cmath.exp(2j * math.pi * self.alpha), 1e-16)

    @property
    def centered(self) -> float:
        """Representative in (-1/2, 1/2]."""
        return self.alpha - 1.0 if self.alpha > 0.5 else self.alpha

    def __neg__(self):
        if self.exact is not None:
            return UnitPhase(0.0, -self.exact)
        return UnitPhase(-self.alpha)

    def __add__(self, other):
        o = UnitPhase.of(other)
        if self.exact is not None and o.exact is not None:
            return UnitPhase(0.0, self.exact + o.exact)
        return UnitPhase(self.alpha + o.alpha)


@dataclass(frozen=True)
class TwistPair:
    alpha: UnitPhase
    beta: UnitPhase

    @classmethod
    def of(cls, a, b) -> "TwistPair":
        return cls(UnitPhase.of(a), UnitPhase.of(b))

    @property
    def is_exact(self) -> bool:
        return self.alpha.exact is not None and self.beta.exact is not None

    def conj(self) -> "TwistPair":
        return TwistPair(-self.alpha, -self.beta)

    def swap(self) -> "TwistPair":
        return TwistPair(self.beta, self.alpha)


def as_twist(t, beta=None) -> TwistPair:
    if isinstance(t, TwistPair):
        return t
    if beta is not None:
        return TwistPair.of(t, beta)
    a, b = t
    return TwistPair.of(a, b)
