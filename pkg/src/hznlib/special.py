"""Integer-order polylogarithms, double polylogarithms, digamma and psi_beta."""
from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np
from scipy import special as sc

from . import _lerch
from .errors import DegeneratePhase, DomainError
from .numerics import SeriesConfig, quad_halfline, sum_phased
from .values import ComplexValue, UnitPhase, as_complex

EULER_GAMMA = 0.57721566490153286061
STIELTJES_1 = -0.07281584548367672486
LOG_TERMS = 64


# ---------------------------------------------------------------- constants

@lru_cache(maxsize=None)
def zeta_int(m: int) -> float:
    """Riemann zeta at an integer m != 1."""
    if m == 1:
        raise DomainError("zeta pole at 1")
    if m >= 2:
        return float(sc.zeta(m))
    if m == 0:
        return -0.5
    if m % 2 == 0:
        return 0.0
    j = (1 - m) // 2           # m = 1 - 2j
    # zeta(1-2j) = (-1)^j 2 (2j-1)! zeta(2j) / (2 pi)^{2j}
    return (-1) ** j * 2.0 * math.exp(math.lgamma(2 * j) - 2 * j * math.log(2 * math.pi)) * float(sc.zeta(2 * j))


def log_power_tail(s: float, N: int = 1) -> float:
    """sum_{n >= N} log(n) n^{-s} for s > 1 (Euler-Maclaurin from n0 = max(N, 24))."""
    n0 = max(N, 24)
    n = np.arange(N, n0, dtype=np.float64)
    head = math.fsum((np.log(n) * n ** (-s)).tolist()) if n.size else 0.0
    t = float(n0)
    lt = math.log(t)
    tot = t ** (1 - s) * (lt / (s - 1) + 1 / (s - 1) ** 2) + 0.5 * lt * t ** (-s)
    a, b = 1.0, 0.0                       # f^{(m)} = t^{-s-m} (a log t + b)
    for m in range(0, 17):
        a, b = (-s - m) * a, (-s - m) * b + a
        if m % 2 == 0:                    # now holds derivative order m+1 (odd)
            j = (m + 2) // 2
            B = float(sc.bernoulli(2 * j)[-1])
            tot -= B / math.factorial(2 * j) * t ** (-s - m - 1) * (a * lt + b)
    return head + tot


@lru_cache(maxsize=None)
def zeta_prime_int(n: int) -> float:
    """zeta'(n) for integers n != 1 (via the functional equation for n <= 0)."""
    if n >= 2:
        return -log_power_tail(float(n), 2)
    if n == 0:
        return -0.5 * math.log(2 * math.pi)
    m = 1 - n                                   # zeta'(1-m), m >= 2
    pre = -2.0 * math.exp(math.lgamma(m) - m * math.log(2 * math.pi))
    c, s_ = math.cos(math.pi * m / 2), math.sin(math.pi * m / 2)
    if m % 2:
        c = 0.0
    else:
        s_ = 0.0
    zm = zeta_int(m)
    val = c * ((float(sc.digamma(m)) - math.log(2 * math.pi)) * zm + zeta_prime_int(m)) if c else 0.0
    return pre * (val - 0.5 * math.pi * s_ * zm)


def harmonic(n: int) -> float:
    return math.fsum(1.0 / j for j in range(1, n + 1))


# ---------------------------------------------------------------- polylog

def _li_log_series(k: int, mu: np.ndarray) -> np.ndarray:
    """Li_k(e^mu) for |mu| < 2 pi, k >= 2."""
    mu = np.asarray(mu, dtype=np.complex128)
    tot = np.zeros_like(mu)
    pw = np.ones_like(mu)
    for n in range(LOG_TERMS):
        if n == k - 1:
            with np.errstate(divide="ignore", invalid="ignore"):
                lg = np.where(mu == 0, 0.0, np.log(np.where(mu == 0, 1.0, -mu)))
            term = pw * (harmonic(k - 1) - lg)
            tot += np.where(mu == 0, 0.0, term) if k == 1 else term
        else:
            tot += zeta_int(k - n) * pw
        pw = pw * mu / (n + 1)
    return tot


def li_array(k: int, w) -> np.ndarray:
    """Li_k(w) for |w| <= 1, vectorised (w = 1 allowed when k >= 2)."""
    w = np.asarray(w, dtype=np.complex128)
    if k == 0:
        return w / (1 - w)
    if k == 1:
        return -np.log(1 - w)
    if k < 0:
        # sum_j j! S(m+1, j+1) u^{j+1}, u = w/(1-w)
        m, u = -k, w / (1 - w)
        tot = np.zeros_like(w)
        for j in range(m + 1):
            tot += math.factorial(j) * float(sc.stirling2(m + 1, j + 1, exact=True)) * u ** (j + 1)
        return tot
    out = np.empty_like(w)
    small = np.abs(w) <= 0.5
    if np.any(small):
        ws = w[small]
        tot = np.zeros_like(ws)
        p = ws.copy()
        for n in range(1, 70):
            tot += p / float(n) ** k
            p = p * ws
        out[small] = tot
    if np.any(~small):
        out[~small] = _li_log_series(k, np.log(w[~small]))
    return out


def li(k: int, z: complex) -> complex:
    """Li_k(z) for |z| <= 1; scalar."""
    z = complex(z)
    if abs(z - 1) < 1e-15:
        if k <= 1:
            raise DomainError("Li_k(1) diverges for k <= 1")
        return zeta_int(k) + 0j
    return complex(li_array(k, np.array([z]))[0])


def li_phase(k: int, alpha: float) -> complex:
    """Li_k(e^{2 pi i alpha}) with the exponent kept exact (mu = 2 pi i {alpha})."""
    a = _lerch.centred(alpha)
    if abs(a) < 1e-12:
        if k <= 1:
            raise DomainError("Li_k(1) diverges for k <= 1")
        return zeta_int(k) + 0j
    if k == 0:
        z = cmath.exp(2j * math.pi * a)
        return z / (1 - z)
    if k < 0:
        # m! (2 pi i)^{-m-1} [zeta(m+1, 1-a) + (-1)^{m+1} zeta(m+1, a)], a = {alpha}
        m, f = -k, alpha % 1.0
        h = sc.zeta(m + 1.0, 1.0 - f) + (-1.0) ** (m + 1) * sc.zeta(m + 1.0, f)
        return complex(math.factorial(m) * h / (2j * math.pi) ** (m + 1))
    if k == 1:
        # -log(1 - e^{i t}) = -log(2 sin(t/2)) + i (pi - t)/2 for t in (0, 2 pi)
        t = 2 * math.pi * (alpha % 1.0)
        return complex(-math.log(2 * math.sin(t / 2)), (math.pi - t) / 2)
    return complex(_li_log_series(k, np.array([2j * math.pi * a]))[0])


def polylog(k: int, z, method: str = "log-series", cfg: SeriesConfig | None = None) -> ComplexValue:
    """Li_k(z) = sum_{n>=1} z^n / n^k for |z| <= 1.

    On the unit circle the default expands in log z; ``method="phased"``
    sums the defining series with summation-by-parts instead.
    """
    if k < 0:
        raise DomainError("k must be non-negative")
    if isinstance(z, UnitPhase):
        ph = z
        zc = complex(ph.z)
    else:
        zc = as_complex(z)
        ph = None
    r = abs(zc)
    if r > 1 + 1e-14:
        raise DomainError("|z| > 1")
    if zc == 0:
        return ComplexValue(0j, 0.0)
    on_circle = abs(r - 1) < 1e-14
    if on_circle and ph is None:
        ph = UnitPhase(math.atan2(zc.imag, zc.real) / (2 * math.pi))
    if on_circle and ph.is_integral:
        if k <= 1:
            raise DomainError("Li_k(1) diverges for k <= 1")
        return ComplexValue(zeta_int(k), 1e-16)
    if on_circle and method == "phased":
        v = sum_phased(lambda q: 1.0 / (q + 1.0) ** k, ph.alpha, cfg)
        return ComplexValue(complex(ph.z) * v.value, v.err)
    if on_circle:
        return ComplexValue(li_phase(k, ph.alpha), 4e-16 * max(1.0, k))
    return ComplexValue(li(k, zc), 4e-16)


def polylog_order_deriv_s1(alpha) -> ComplexValue:
    """d/ds Li_s(e^{2 pi i alpha}) at s = 1, i.e. -sum_{n>=2} z^n log(n)/n."""
    ph = UnitPhase.of(alpha)
    if ph.is_integral:
        raise DomainError("alpha must be non-integral")
    mu = 2j * math.pi * ph.centered
    L = cmath.log(-mu)
    g = EULER_GAMMA
    tot = -(L * L / 2 + g * L + g * g / 2 + math.pi ** 2 / 12 + STIELTJES_1)
    pw = 1.0 + 0j
    for n in range(1, LOG_TERMS):
        pw *= mu / n
        tot += zeta_prime_int(1 - n) * pw
    return ComplexValue(tot, 1e-14)


def order_deriv_phased(alpha, cfg: SeriesConfig | None = None) -> ComplexValue:
    """Same quantity by accelerated direct summation (cross-check)."""
    ph = UnitPhase.of(alpha)
    z = complex(ph.z)
    v = sum_phased(lambda q: -np.log(q + 2.0) / (q + 2.0), ph.alpha, cfg)
    return ComplexValue(z * z * v.value, v.err)


# ---------------------------------------------------------------- double polylog

def _tail_inner(b: int, beta2: float, p: np.ndarray) -> np.ndarray:
    """T_b(p) = sum_{q>p} z2^q q^{-b} for |z2| = 1."""
    p = np.asarray(p, dtype=np.float64)
    if _lerch.is_integral(beta2):
        return sc.zeta(float(b), p + 1.0).astype(np.complex128)
    return _lerch.phase(beta2, p + 1) * _lerch.lerch(beta2, b, p + 1.0 + 0j)


def _double_circle(a: int, b: int, beta1: float, beta2: float) -> complex:
    int2 = _lerch.is_integral(beta2)
    rho2 = 2 * math.pi if int2 else 2 * math.pi * abs(_lerch.centred(beta2))
    P = int(math.ceil((_lerch.FULL_MARGIN + 2 * (a + b) + 4) / rho2)) + 1
    p = np.arange(1, P, dtype=np.float64)
    head_terms = _lerch.phase(beta1, p) * p ** (-float(a)) * _tail_inner(b, beta2, p)
    head = complex(math.fsum(head_terms.real.tolist()), math.fsum(head_terms.imag.tolist()))
    # tail p >= P: T_b(p) = z2^p (L_b(p) - p^{-b}) with the large-p expansion of L_b
    b12 = beta1 + beta2
    rp = rho2 * P
    nmax = max(2, int(rp) - b)
    s_list = list(range(a + b - 1 if int2 else a + b, a + b + nmax + 1))
    T = dict(zip(s_list, _lerch.tail_scaled(b12, s_list, P)))

    PS = float(P) ** (a + b)
    tot = -T[a + b] / PS
    if int2:
        tot += T[a + b - 1] / float(P) ** (a + b - 1) / (b - 1)
        coef = _lerch.gtilde(0.0, 300) * rho2 ** np.arange(1, 302)
    else:
        coef = _lerch.gscaled(_lerch.frac(beta2), 300)
    cf = 1.0
    for n in range(nmax + 1):
        tot += coef[n] / rho2 * cf * T[a + b + n] / PS
        cf *= (n + b) / rp
        if n > 3 and abs(cf) < 1e-20:
            break
    return head + tot


def double_polylog(a: int, b: int, z1, z2) -> ComplexValue:
    """Li_{a,b}(z1, z2) = sum_{0<p<q} z1^p z2^q / (p^a q^b)."""
    if a < 1 or b < 1:
        raise DomainError("orders must be positive")
    p1 = z1 if isinstance(z1, UnitPhase) else None
    p2 = z2 if isinstance(z2, UnitPhase) else None
    c1 = complex(p1.z) if p1 else as_complex(z1)
    c2 = complex(p2.z) if p2 else as_complex(z2)
    if abs(c1) > 1 + 1e-14 or abs(c2) > 1 + 1e-14:
        raise DomainError("|z| > 1")
    if c1 == 0 or c2 == 0:
        return ComplexValue(0j, 0.0)
    on1, on2 = abs(abs(c1) - 1) < 1e-14, abs(abs(c2) - 1) < 1e-14
    b1 = p1.alpha if p1 else math.atan2(c1.imag, c1.real) / (2 * math.pi)
    b2 = p2.alpha if p2 else math.atan2(c2.imag, c2.real) / (2 * math.pi)
    if on2 and b == 1 and _lerch.is_integral(b2):
        raise DomainError("z2 = 1 with b = 1 diverges")
    if on1 and on2:
        return ComplexValue(_double_circle(a, b, b1, b2), 1e-14)
    # at least one strictly inside the disc: geometric convergence
    if on2:
        # outer sum over p decays like |z1|^p
        nP = int(math.ceil(40 / -math.log(abs(c1)))) + 2
        p = np.arange(1, nP, dtype=np.float64)
        terms = c1 ** p * p ** (-float(a)) * _tail_inner(b, b2, p)
    else:
        nQ = int(math.ceil(40 / -math.log(abs(c2)))) + 2
        q = np.arange(1, nQ, dtype=np.float64)
        inner = np.concatenate([[0.0], np.cumsum(c1 ** q * q ** (-float(a)))[:-1]])
        terms = c2 ** q * q ** (-float(b)) * inner
    return ComplexValue(complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist())), 1e-14)


# ---------------------------------------------------------------- digamma

_B2J = [1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510]


def digamma_array(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if np.any((np.abs(x.imag) < 1e-300) & (x.real <= 0)):
        raise DomainError("digamma on the cut (-inf, 0]")
    N = np.maximum(0, np.ceil(12.0 - x.real)).astype(np.int64)
    acc = np.zeros_like(x)
    for j in range(int(N.max()) if N.size else 0):
        acc += np.where(j < N, 1.0 / (x + j), 0.0)
    y = x + N
    inv2 = 1.0 / (y * y)
    s = np.zeros_like(y)
    p = inv2.copy()
    for j, B in enumerate(_B2J, start=1):
        s += B / (2 * j) * p
        p = p * inv2
    return np.log(y) - 0.5 / y - s - acc


def digamma(x) -> ComplexValue:
    """psi(x) = Gamma'(x)/Gamma(x) off (-inf, 0]."""
    xc = as_complex(x)
    v = complex(digamma_array(np.array([xc]))[0])
    if xc.imag == 0:
        v = complex(v.real, 0.0)
    return ComplexValue(v, 1e-15 * max(1.0, abs(v)))


# ---------------------------------------------------------------- psi_beta

def _binet(beta: float, x: float, tol: float = 1e-14) -> ComplexValue:
    b = beta
    lead = 1 / (2 * x) - 1j * (digamma_array(b)[()] - digamma_array(1 - b)[()]) / (2 * math.pi * x)

    def f(y):
        y = np.asarray(y, dtype=np.float64)
        with np.errstate(invalid="ignore", divide="ignore"):
            ker = np.where(y > 0, -y / np.expm1(-2 * math.pi * y), 1 / (2 * math.pi))
        a1 = np.exp(-2 * math.pi * b * y) / (x * (x + 1j * y))
        a2 = np.exp(-2 * math.pi * (1 - b) * y) / (x * (x - 1j * y))
        return (a1 + a2) * ker

    scale = 1.0 / (2 * math.pi * min(b, 1 - b))
    I = quad_halfline(f, scale, tol=tol)
    return ComplexValue(complex(lead) + I.value, I.err + 1e-15)


def lerch_psi(beta, x, route: str = "series") -> ComplexValue:
    """psi_beta(x) = sum_{q>=0} e^{2 pi i beta q} / (x + q)."""
    ph = UnitPhase.of(beta)
    if ph.is_integral:
        raise DegeneratePhase("beta must be non-integral")
    xc = as_complex(x)
    if abs(xc.imag) < 1e-12 and xc.real <= 1e-12:
        raise DomainError("x on the cut (-inf, 0]")
    if route == "series":
        v = complex(_lerch.psi(ph.alpha, np.array([xc]))[0])
        return ComplexValue(v, 1e-15 * max(1.0, abs(v)))
    if route == "binet":
        if xc.imag != 0 or xc.real <= 0:
            raise DomainError("binet route needs real x > 0")
        return _binet(ph.alpha, xc.real)
    raise ValueError(f"unknown route {route!r}")
