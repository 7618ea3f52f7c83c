"""Deterministic summation and quadrature engine.

Error estimates throughout are heuristic (differences of refinements), not
rigorous bounds.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .errors import DegeneratePhase, NonConvergent
from .values import ComplexValue, UnitPhase


@dataclass(frozen=True)
class SeriesConfig:
    abs_tol: float = 1e-13
    max_terms: int = 2_000_000
    parts_depth: int = 2

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_terms < 16:
            raise ValueError("max_terms must be at least 16")
        if not 0 <= self.parts_depth <= 8:
            raise ValueError("parts_depth must lie in 0..8")

    @classmethod
    def from_env(cls, **kw) -> "SeriesConfig":
        """Defaults with HZN_TOL / HZN_MAX_TERMS applied when set."""
        if "HZN_TOL" in os.environ and "abs_tol" not in kw:
            kw["abs_tol"] = float(os.environ["HZN_TOL"])
        if "HZN_MAX_TERMS" in os.environ and "max_terms" not in kw:
            kw["max_terms"] = int(os.environ["HZN_MAX_TERMS"])
        return cls(**kw)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes (abscissa, weight) on [0, 1]."""

    nodes: Tuple[Tuple[float, float], ...]
    kind: str = "finite-panel"

    def __post_init__(self):
        if self.kind not in ("finite-panel", "half-line-exponential"):
            raise ValueError(f"unknown rule kind {self.kind!r}")
        xs = [a for a, _ in self.nodes]
        if any(w <= 0 for _, w in self.nodes) or any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("weights must be positive and abscissae increasing")

    @property
    def x(self) -> np.ndarray:
        return np.array([a for a, _ in self.nodes])

    @property
    def w(self) -> np.ndarray:
        return np.array([b for _, b in self.nodes])

    @property
    def order(self) -> int:
        return len(self.nodes)

    def refined(self) -> "QuadratureRule":
        return gauss_legendre(2 * self.order, self.kind)


@lru_cache(maxsize=32)
def gauss_legendre(n: int = 24, kind: str = "finite-panel") -> QuadratureRule:
    x, w = np.polynomial.legendre.leggauss(n)
    return QuadratureRule(tuple(zip(((x + 1) / 2).tolist(), (w / 2).tolist())), kind)


def _call(f, t):
    try:
        v = f(t)
        v = np.asarray(v, dtype=np.complex128)
        if v.shape == t.shape:
            return v
    except (TypeError, ValueError):
        pass
    return np.array([complex(f(ti)) for ti in t], dtype=np.complex128)


def _coeff_values(coeff, q: np.ndarray) -> np.ndarray:
    try:
        v = coeff(q)
        if isinstance(v, ComplexValue):
            raise TypeError
        v = np.asarray(v, dtype=np.complex128)
        if v.shape == q.shape:
            return v
    except (TypeError, ValueError, AttributeError):
        pass
    out = np.empty(q.shape, dtype=np.complex128)
    for i, qi in enumerate(q.tolist()):
        c = coeff(int(qi))
        out[i] = c.value if isinstance(c, ComplexValue) else complex(c)
    return out


def _euler_tail(beta: float, z: complex, g: np.ndarray, n0: int, J: int, optimal: bool = False):
    """sum_{q>=n0} z^q g(q) from forward differences of g at n0; returns (value, last term).

    With ``optimal`` the series stops before the first term that grows, which
    matters when |1 - z| is small and differences of rounding noise get amplified.
    """
    d = np.array(g[n0:n0 + J + 1], dtype=np.complex128)
    zn = np.exp(2j * np.pi * ((beta * n0) % 1.0))
    tot, last, r = 0j, 0.0, 1.0 / (1.0 - z)
    fac = r
    for j in range(J + 1):
        term = zn * fac * d[0]
        if optimal and j > 0 and abs(term) > last:
            break
        tot += term
        last = abs(term)
        d = np.diff(d)
        fac *= z * r
    return tot, last


def sum_phased(coeff: Callable, phase, cfg: Optional[SeriesConfig] = None) -> ComplexValue:
    """sum_{q>=0} e^{2 pi i beta q} coeff(q) with summation-by-parts acceleration.

    ``coeff`` is called on integer numpy arrays when it accepts them,
    otherwise on Python ints one at a time.
    """
    cfg = cfg or SeriesConfig.from_env()
    ph = UnitPhase.of(phase)
    if ph.is_integral:
        raise DegeneratePhase("phase is integral")
    beta = ph.alpha
    z = complex(np.exp(2j * np.pi * beta))
    m, J = cfg.parts_depth, 3
    r = 1.0 / (1.0 - z)

    n = 64
    prev = None
    while True:
        nn = min(n, cfg.max_terms)
        f = _coeff_values(coeff, np.arange(nn + m + J + 2))
        head, fac, d = 0j, r, f.copy()
        for j in range(m):
            head += fac * d[0]
            fac *= z * r
            d = np.diff(d)
        # d now holds Delta^m f on 0 .. nn+J+1; fac = z^m/(1-z)^(m+1) * (1-z)
        scale = fac * (1.0 - z)
        body = kernels.phased_sum(beta, d[:nn])
        tail, last = _euler_tail(beta, z, d, nn, J)
        total = head + scale * (body + tail)
        round_err = 1e-16 * (abs(head) + abs(scale) * float(np.abs(d[:nn]).sum()))
        err = abs(scale) * last + round_err
        if prev is not None:
            err = max(err, abs(total - prev))
        if err <= cfg.abs_tol:
            return ComplexValue(total, err)
        if nn >= cfg.max_terms:
            raise NonConvergent(f"sum_phased: error {err:.3g} > {cfg.abs_tol:.3g} at {nn} terms")
        prev = total
        n *= 2


def quad_panel(f: Callable, a, b, rule: Optional[QuadratureRule] = None,
               tol: float = 1e-13, max_depth: int = 40) -> ComplexValue:
    """Integral of f over the straight segment [a, b] (endpoints may be complex).

    Node-doubling comparison per panel with adaptive bisection.
    """
    rule = rule or gauss_legendre(24)
    fine = rule.refined()
    x1, w1, x2, w2 = rule.x, rule.w, fine.x, fine.w

    def panel(lo, hi):
        h = hi - lo
        i1 = h * np.dot(w1, _call(f, lo + h * x1))
        i2 = h * np.dot(w2, _call(f, lo + h * x2))
        return complex(i2), abs(i2 - i1)

    total, err_tot = [], 0.0
    floor = tol * 2.0 ** -20          # bisection halves the budget; stop halving here
    stack = [(a, b, 0, tol)]
    while stack:
        lo, hi, depth, t = stack.pop()
        v, e = panel(lo, hi)
        if e <= max(t, floor) or e <= 4e-16 * abs(v):
            total.append(v)
            err_tot += e
        elif depth >= max_depth:
            raise NonConvergent(f"quad_panel: refinement difference {e:.3g} > {t:.3g}")
        else:
            mid = lo + (hi - lo) / 2
            stack.append((mid, hi, depth + 1, t / 2))
            stack.append((lo, mid, depth + 1, t / 2))
    re = math.fsum(v.real for v in total)
    im = math.fsum(v.imag for v in total)
    return ComplexValue(complex(re, im), err_tot)


def quad_halfline(f: Callable, scale: float, rule: Optional[QuadratureRule] = None,
                  tol: float = 1e-13, max_panels: int = 200) -> ComplexValue:
    """Integral of f over (0, inf) on geometric panels [2^j scale, 2^(j+1) scale]."""
    if not scale > 0:
        raise ValueError("scale must be positive")
    ptol = tol / 20
    parts = []
    # towards zero
    hi = scale
    for j in range(max_panels):
        lo = hi / 2
        v = quad_panel(f, lo, hi, rule, ptol)
        parts.append(v)
        hi = lo
        if j >= 3 and abs(v.value) < tol / 10:
            break
    else:
        raise NonConvergent("quad_halfline: no decay towards 0")
    parts.append(quad_panel(f, 0.0, hi, rule, ptol))
    # towards infinity
    lo, small = scale, 0
    for j in range(max_panels):
        v = quad_panel(f, lo, 2 * lo, rule, ptol)
        parts.append(v)
        lo *= 2
        small = small + 1 if abs(v.value) < tol / 10 else 0
        if small >= 2:
            break
    else:
        raise NonConvergent("quad_halfline: integrand does not decay")
    re = math.fsum(p.value.real for p in parts)
    im = math.fsum(p.value.imag for p in parts)
    return ComplexValue(complex(re, im), sum(p.err for p in parts))


def compensated_sum(values: Sequence[complex]) -> complex:
    v = np.asarray(values, dtype=np.complex128).ravel()
    return complex(math.fsum(v.real.tolist()), math.fsum(v.imag.tolist()))
