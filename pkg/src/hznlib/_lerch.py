"""Lerch-type sums L_s(X) = sum_{q>=0} z^q (X+q)^(-s), z = e(beta), and their tails.

g(t) = 1/(1 - z e^{-t}) has simple poles at c_m = 2 pi i (b + m), b the
centred phase.  Two large-X expansions are used:

* full:  L_s(X) ~ sum_n G_n Gamma(n+s)/Gamma(s) X^{-n-s},   G_n = [t^n] g,
  accurate once rho*|X| is large (rho = 2 pi |b|);
* split: psi(X) = L_1(X) = E(X) + sum_n Gt_n n! X^{-n-1}, E(X) = e^{-Xc} E1(-Xc),
  where the nearest pole is handled exactly; accurate for |X| >= 15 at any b.

Smaller arguments are first shifted with L(X) = sum_{q<N} + z^N L(X+N).
For Re X < 0, psi uses psi_b(X) = K_b(X) + z^{-1} psi_{-b}(1-X) with
K_b(X) = sum_{n in Z} z^n/(X+n).
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import special as sc

from . import kernels
from .errors import DegeneratePhase, NonConvergent, PoleEncountered
from .values import INTEGRAL_TOL

TWO_PI = 2.0 * math.pi
SPLIT_X = 15.0       # shift target for the split expansion
SPLIT_TERMS = 40
FULL_MARGIN = 45.0   # rho*X needed by the full expansion is FULL_MARGIN + 2 s


def frac(beta: float) -> float:
    b = float(beta) % 1.0
    return 0.0 if b >= 1.0 else b


def centred(beta: float) -> float:
    b = frac(beta)
    return b - 1.0 if b > 0.5 else b


def is_integral(beta: float) -> bool:
    return abs(centred(beta)) < INTEGRAL_TOL


def phase(beta, n):
    t = frac(beta) * np.asarray(n, dtype=np.float64)
    return np.exp(2j * np.pi * (t - np.floor(t)))


def _check(beta):
    if is_integral(beta):
        raise DegeneratePhase("integral phase")


def _cot_minus_inv(b: float) -> float:
    """pi cot(pi b) - 1/b, stable near 0."""
    if abs(b) < 0.1:
        tot, b2, p = 0.0, b * b, b
        for j in range(1, 30):
            tot += sc.zeta(2 * j) * p
            p *= b2
        return -2.0 * tot
    return math.pi / math.tan(math.pi * b) - 1.0 / b


@lru_cache(maxsize=512)
def gtilde(beta: float, nmax: int = 80) -> np.ndarray:
    """Taylor coefficients of g(t) - 1/(t - c) (nearest pole removed)."""
    b = centred(beta)
    out = np.empty(nmax + 1, dtype=np.complex128)
    out[0] = 0.5 - _cot_minus_inv(b) / (TWO_PI * 1j) if b != 0 else 0.5
    n = np.arange(1, nmax + 1)
    s = (n + 1).astype(float)
    h = sc.zeta(s, 1.0 + b) + (-1.0) ** (n + 1) * sc.zeta(s, 1.0 - b)
    out[1:] = -h / (TWO_PI * 1j) ** (n + 1)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=512)
def gscaled(beta: float, nmax: int = 200) -> np.ndarray:
    """rho^{n+1} G_n for the full Taylor coefficients G_n of g (non-integral beta)."""
    b = centred(beta)
    rho = TWO_PI * abs(b)
    c = TWO_PI * 1j * b
    u = rho / c                    # unit modulus
    n = np.arange(nmax + 1)
    gt = np.empty(nmax + 1, dtype=np.complex128)
    gt[0] = gtilde(beta, 1)[0]
    s = (n[1:] + 1).astype(float)
    h = sc.zeta(s, 1.0 + b) + (-1.0) ** (n[1:] + 1) * sc.zeta(s, 1.0 - b)
    # Gt_n rho^{n+1} = -h (rho / 2 pi i)^{n+1}; |rho/2pi| = |b| <= 1/2
    gt[1:] = -h * (abs(b) / 1j) ** (n[1:] + 1)
    out = -(u ** (n + 1)) + gt * np.where(n == 0, rho, 1.0)
    out.setflags(write=False)
    return out


def taylor_G(beta: float, nmax: int) -> np.ndarray:
    """Unscaled G_n (may overflow for phases extremely close to integers)."""
    rho = TWO_PI * abs(centred(beta))
    n = np.arange(nmax + 1)
    return gscaled(beta, max(nmax, 1))[: nmax + 1] / rho ** (n + 1)


def _exp_e1(w: np.ndarray) -> np.ndarray:
    """e^w E1(w), principal branch."""
    w = np.asarray(w, dtype=np.complex128)
    out = np.empty_like(w)
    big = np.abs(w) > 40.0
    if np.any(~big):
        ws = w[~big]
        out[~big] = np.exp(ws) * sc.exp1(ws)
    if np.any(big):
        wb = w[big]
        tot = np.zeros_like(wb)
        t = 1.0 / wb
        for n in range(60):
            tot += t
            t = -t * (n + 1) / wb
        out[big] = tot
    return out


def _shift_counts(X: np.ndarray, target: float) -> np.ndarray:
    return np.maximum(0, np.ceil(target - X.real)).astype(np.int64)


def _psi_right(beta: float, X: np.ndarray) -> np.ndarray:
    """psi_beta(X) for Re X >= 0 (split expansion)."""
    b = centred(beta)
    c = TWO_PI * 1j * b
    N = _shift_counts(X, SPLIT_X)
    head = kernels.lerch_direct(frac(beta), X, N, 1) if N.any() else np.zeros_like(X)
    Y = X + N
    gt = gtilde(frac(beta))
    inv = 1.0 / Y
    tot = np.zeros_like(Y)
    t = inv.copy()
    for n in range(SPLIT_TERMS + 1):
        tot += gt[n] * t
        t = t * (n + 1) * inv
    return head + phase(beta, N) * (_exp_e1(-Y * c) + tot)


def kfun(beta: float, X: np.ndarray, i: int = 0) -> np.ndarray:
    """i-th derivative of K_b(X) = sum_{n in Z} z^n/(X+n), 0 < b < 1."""
    b = frac(beta)
    X = np.asarray(X, dtype=np.complex128)
    out = np.zeros_like(X)
    up = X.imag > 0
    if i == 0:
        xu, xd = X[up], X[~up]
        out[up] = -TWO_PI * 1j * np.exp(TWO_PI * 1j * (1 - b) * xu) / (1 - np.exp(TWO_PI * 1j * xu))
        out[~up] = TWO_PI * 1j * np.exp(-TWO_PI * 1j * b * xd) / (1 - np.exp(-TWO_PI * 1j * xd))
        return out
    im = np.abs(X.imag)
    if np.any(im < 1e-3):
        raise NonConvergent("K derivative too close to the real axis")
    mmax = int(math.ceil(45.0 / (TWO_PI * float(im.min())))) + 2
    if mmax > 200000:
        raise NonConvergent("K derivative series too long")
    for m in range(mmax):
        if np.any(up):
            a = m + 1 - b
            out[up] += -TWO_PI * 1j * (TWO_PI * 1j * a) ** i * np.exp(TWO_PI * 1j * a * X[up])
        if np.any(~up):
            a = b + m
            out[~up] += TWO_PI * 1j * (-TWO_PI * 1j * a) ** i * np.exp(-TWO_PI * 1j * a * X[~up])
    return out


def psi(beta: float, X) -> np.ndarray:
    """psi_beta(X) = sum_q z^q/(X+q), vectorised, any X off the poles."""
    _check(beta)
    X = np.atleast_1d(np.asarray(X, dtype=np.complex128))
    if np.any((np.abs(X.imag) < 1e-14) & (X.real <= 0) &
              (np.abs(X.real - np.round(X.real)) < 1e-14)):
        raise PoleEncountered("psi at a non-positive integer")
    out = np.empty_like(X)
    left = X.real < 0
    if np.any(~left):
        out[~left] = _psi_right(beta, X[~left])
    if np.any(left):
        xl = X[left]
        zb = np.exp(-TWO_PI * 1j * frac(beta))
        out[left] = kfun(beta, xl) + zb * _psi_right(-frac(beta), 1.0 - xl)
    return out


def _full_target(beta: float, s: int) -> float:
    rho = TWO_PI * abs(centred(beta))
    return (FULL_MARGIN + 2 * s) / rho


def full_scaled(beta: float, s: int, Y: np.ndarray) -> np.ndarray:
    """Y^s * sum_n G_n Gamma(n+s)/Gamma(s) Y^{-n-s} for large rho*|Y|."""
    rho = TWO_PI * abs(centred(beta))
    Y = np.asarray(Y, dtype=np.complex128)
    ry = rho * Y
    nmax = min(300, max(1, int(float(np.abs(ry).min())) - s))
    g = gscaled(frac(beta), 300)
    tot = np.zeros_like(Y)
    cf = np.ones_like(Y)
    for n in range(nmax + 1):
        tot += g[n] * cf
        cf = cf * (n + s) / ry
        if n > 4 and float(np.abs(cf).max()) < 1e-19:
            break
    return tot / rho


def lerch(beta: float, s: int, X) -> np.ndarray:
    """L_s(X) = sum_q z^q (X+q)^{-s} for integer s >= 1."""
    _check(beta)
    if s == 1:
        return psi(beta, X)
    X = np.atleast_1d(np.asarray(X, dtype=np.complex128))
    target = _full_target(beta, s)
    N = _shift_counts(X, target)
    Y = X + N
    head = kernels.lerch_direct(frac(beta), X, N, s) if N.any() else np.zeros_like(X)
    # (1/Y)^s underflows to 0 for huge Y^s where Y**s would overflow to nan
    return head + phase(beta, N) * full_scaled(beta, s, Y) * (1.0 / Y) ** s


@lru_cache(maxsize=4096)
def _tail_cached(beta: float, P: int, smax: int, smin: int):
    s = np.arange(smin, smax + 1)
    if is_integral(beta):
        if smin < 2:
            raise DegeneratePhase("divergent tail")
        out = np.array([_hurwitz_scaled(int(sj), P) for sj in s], dtype=np.complex128)
        out.setflags(write=False)
        return out
    rho = TWO_PI * abs(centred(beta))
    P1 = max(P, int(math.ceil((FULL_MARGIN + 2 * smax) / rho)))
    out = np.zeros(s.size, dtype=np.complex128)
    if P1 > P:
        out += kernels.phase_power_block(frac(beta), P, P1 - P, s.astype(np.float64))
    zP1 = complex(phase(beta, P1))
    for j, sj in enumerate(s):
        out[j] += zP1 * (P / P1) ** sj * complex(full_scaled(beta, int(sj), np.array([P1 + 0j]))[0])
    out.setflags(write=False)
    return out


def _hurwitz_scaled(s: int, P: int) -> float:
    """P^s zeta(s, P) without underflow."""
    if s * math.log10(P) < 250:
        return float(sc.zeta(float(s), float(P))) * float(P) ** s
    j = np.arange(0, int(45 * P / s) + 20, dtype=np.float64)
    return math.fsum(((P / (P + j)) ** float(s)).tolist())


def tail_scaled(beta: float, s_list, P: int) -> np.ndarray:
    """P^s * sum_{p>=P} z^p p^{-s} for each s in the contiguous range s_list."""
    s_list = list(s_list)
    smin, smax = min(s_list), max(s_list)
    b = 0.0 if is_integral(beta) else frac(beta)
    arr = _tail_cached(b, int(P), int(smax), int(smin))
    return np.array([arr[sj - smin] for sj in s_list])
