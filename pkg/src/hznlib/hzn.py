"""The higher Herglotz function F_k(x; alpha, beta) and its relatives.

F_k(x) = sum_{p>=1} e(alpha p) p^{1-k} psi_beta(p x).  All p-sums are split at
a cut P: the head is summed term by term, the tail p >= P uses the large-X
expansion of the inner Lerch sum, which turns it into phased power tails
sum_{p>=P} e(alpha p) p^{-m}.  Left of the imaginary axis the exponentially
small K_beta terms of the inner sum become visible and are summed explicitly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import special as sc

from . import _lerch
from .errors import DegenerateArguments, DomainError, NonConvergent, PoleEncountered
from .numerics import compensated_sum, quad_halfline, quad_panel
from .special import (digamma_array, li_array, li_phase, log_power_tail, zeta_int)
from .values import ComplexValue, TwistPair, as_complex, as_twist

CUT_TOL = 1e-12


@dataclass(frozen=True)
class HznValue:
    value: ComplexValue
    route: str
    err_est: float

    def __complex__(self):
        return self.value.value


def _check_x(x: complex):
    if abs(x.imag) < CUT_TOL and x.real <= CUT_TOL:
        raise DomainError("x on the cut (-inf, 0]")


# ---------------------------------------------------------------- row sums

def row_sum(s: int, x: complex, alpha: float, beta: float, pexp: int) -> tuple:
    """sum_{p>=1} e(alpha p) p^pexp L^beta_s(p x), with L^beta_s(X) = sum_q e(beta q)(X+q)^{-s}.

    Returns (value, error estimate).  Integral beta needs s >= 2 and real x > 0.
    """
    x = complex(x)
    int_b = _lerch.is_integral(beta)
    int_a = _lerch.is_integral(alpha)
    if int_b and (s < 2 or x.imag != 0 or x.real <= 0):
        raise DomainError("integral beta needs s >= 2 and real x > 0")
    rho = 2 * math.pi if int_b else 2 * math.pi * abs(_lerch.centred(beta))
    ax = abs(x)
    P = max(2, int(math.ceil((_lerch.FULL_MARGIN + 2 * s) / (rho * ax))))
    p = np.arange(1, P, dtype=np.float64)
    X = p * x
    if int_b:
        inner = sc.zeta(float(s), X.real).astype(np.complex128)
    elif s == 1:
        inner = _lerch.psi(beta, X)
    else:
        inner = _lerch.lerch(beta, s, X)
    terms = _lerch.phase(alpha, p) * p ** float(pexp) * inner
    head = compensated_sum(terms)
    mag = float(np.abs(terms).sum())

    # tail: sum_n c_n x^{-n-s} sum_{p>=P} e(alpha p) p^{pexp-n-s}
    rx = rho * x
    nmax, mag_cf = 0, 1.0
    while nmax < max(4, int(rho * ax * P) - s):
        mag_cf *= (nmax + s) / (rho * ax * P)
        nmax += 1
        if nmax > 4 and mag_cf < 1e-20:
            break
    m0 = s - pexp
    lo = m0 - 1 if int_b else m0
    if lo < (2 if int_a else 1):
        raise DomainError("divergent p-sum")
    T = _lerch.tail_scaled(alpha, range(lo, m0 + nmax + 1), P)
    PP = float(P)
    if int_b:
        coef = _lerch.gtilde(0.0, 300) * rho ** np.arange(1, 302)
    else:
        coef = _lerch.gscaled(_lerch.frac(beta), 300)
    # c_n x^{-n-s} p^{-n-s} = (coef_n/rho) * Gamma(n+s)/Gamma(s) (rho x P)^{-n} (xP)^{-s} (P/p)^{n+s}
    pre = 1.0 / (x * PP) ** s * PP ** pexp
    tail = 0j
    cf = 1.0 + 0j
    last = 0.0
    for n in range(nmax + 1):
        t = coef[n] / rho * cf * T[m0 + n - lo]
        tail += t
        last = abs(t)
        cf = cf * (n + s) / (rx * PP)
        if n > 4 and abs(cf) < 1e-20:
            break
    tail *= pre
    if int_b:
        # leading X^{1-s}/(s-1) of the Hurwitz expansion
        tail += T[0] * PP ** (1 - m0) / (x ** (s - 1) * (s - 1))
    if x.real < 0:
        tail += _k_tail(s, x, alpha, beta, pexp, P)
    err = 1e-16 * (mag + abs(tail)) * 8 + last * abs(pre)
    return head + tail, err


def _k_tail(s, x, alpha, beta, pexp, P):
    """sum_{p>=P} e(alpha p) p^pexp (-1)^{s-1}/(s-1)! K^{(s-1)}(p x)."""
    b = _lerch.frac(beta)
    dec = 2 * math.pi * min(b, 1 - b) * abs(x.imag)
    if dec <= 0:
        raise NonConvergent("K tail on the real axis")
    pmax = P + int(math.ceil(48.0 / dec)) + 1
    if pmax - P > 5_000_000:
        raise NonConvergent("x too close to the negative real axis")
    fac = (-1) ** (s - 1) / math.factorial(s - 1)
    tot = 0j
    for lo in range(P, pmax, 65536):
        p = np.arange(lo, min(pmax, lo + 65536), dtype=np.float64)
        v = _lerch.phase(alpha, p) * p ** float(pexp) * _lerch.kfun(beta, p * x, s - 1)
        tot += compensated_sum(v)
    return fac * tot


# ---------------------------------------------------------------- F_k

def _prep(k, x, t, need_alpha=False):
    xc = as_complex(x)
    _check_x(xc)
    t = as_twist(t)
    if t.beta.is_integral:
        raise DomainError("beta must be non-integral")
    if (k == 1 or need_alpha) and t.alpha.is_integral:
        raise DomainError("alpha must be non-integral")
    return xc, t


def f_series(k: int, x: complex, alpha: float, beta: float, i: int = 0) -> tuple:
    """i-th derivative of F_k at x; (value, err)."""
    v, e = row_sum(i + 1, x, alpha, beta, i - k + 1)
    sgn = (-1) ** i * math.factorial(i)
    return sgn * v, abs(sgn) * e


def f_integral(k: int, x: complex, alpha: float, beta: float, tol: float = 1e-13) -> ComplexValue:
    za = np.exp(2j * math.pi * alpha)
    zb = np.exp(2j * math.pi * beta)

    def f(tt):
        tt = np.asarray(tt, dtype=np.float64)
        if k == 2 and _lerch.is_integral(alpha):
            num = -np.log(-np.expm1(-x * tt))
        else:
            num = li_array(k - 1, np.exp(-x * tt) * za)
        return num / (1 - np.exp(-tt) * zb)

    return quad_halfline(f, 1.0 / min(1.0, x.real), tol=tol)


def hzn_eval(k: int, x, t, route: str = "series", beta=None) -> HznValue:
    """F_k(x; alpha, beta) = sum_{p>=1, q>=0} e(alpha p + beta q) / (p^{k-1} (p x + q))."""
    if k < 1:
        raise DomainError("k must be >= 1")
    xc, t = _prep(k, x, as_twist(t, beta))
    if route == "series":
        v, e = f_series(k, xc, t.alpha.alpha, t.beta.alpha)
        return HznValue(ComplexValue(v, e), "series", e)
    if route == "integral":
        if xc.real <= 0:
            raise DomainError("integral route needs Re x > 0")
        r = f_integral(k, xc, t.alpha.alpha, t.beta.alpha)
        return HznValue(r, "integral", r.err)
    raise ValueError(f"unknown route {route!r}")


def hzn_deriv(k: int, i: int, x, t, beta=None) -> ComplexValue:
    """d^i/dx^i F_k(x; alpha, beta)."""
    if k < 2 or i < 0 or i > 2 * k:
        raise DomainError("need k >= 2 and 0 <= i <= 2k")
    xc, t = _prep(k, x, as_twist(t, beta))
    v, e = f_series(k, xc, t.alpha.alpha, t.beta.alpha, i)
    return ComplexValue(v, e)


def hzn_family(k: int, t) -> Callable:
    """f(i, x) -> F_k^{(i)}(x) as a plain complex (scalar or array x)."""
    t = as_twist(t)
    a, b = t.alpha.alpha, t.beta.alpha

    def f(i, x):
        if np.ndim(x):
            return np.array([f(i, xi) for xi in np.ravel(x)]).reshape(np.shape(x))
        xc = complex(x)
        _check_x(xc)
        return f_series(k, xc, a, b, i)[0]

    return f


def novikov_rho(x, t, beta=None, tol: float = 1e-13) -> ComplexValue:
    """rho(x, alpha, beta) = int_0^1 log(1 - t^x e(alpha)) / (e(-beta) - t) dt, Re x > 0.

    Uses t = e^{-u}.  Related to F_2 by F_2(x) = -rho(x) + Li_2(e(alpha))/x.
    """
    xc = as_complex(x)
    if xc.real <= 0:
        raise DomainError("Re x must be positive")
    t = as_twist(t, beta)
    if t.beta.is_integral:
        raise DomainError("beta must be non-integral")
    za = complex(t.alpha.z)
    zbi = 1.0 / complex(t.beta.z)
    int_a = t.alpha.is_integral

    def f(u):
        u = np.asarray(u, dtype=np.float64)
        eu = np.exp(-u)
        lg = np.log(-np.expm1(-xc * u)) if int_a else np.log(1 - np.exp(-xc * u) * za)
        return lg * eu / (zbi - eu)

    return quad_halfline(f, 1.0 / min(1.0, xc.real), tol=tol)


# ---------------------------------------------------------------- asymptotics

def taylor_a(beta, n: int) -> ComplexValue:
    """a_n(beta) = d^n/dt^n (1 - e^{-t} e(beta))^{-1} at t = 0, by series inversion."""
    from .values import UnitPhase
    ph = UnitPhase.of(beta)
    if ph.is_integral:
        raise DomainError("beta must be non-integral")
    if not 0 <= n <= 16:
        raise DomainError("n must lie in 0..16")
    z = complex(ph.z)
    G = [1 / (1 - z)]
    for m in range(1, n + 1):
        acc = sum(G[m - j] * (-1) ** j / math.factorial(j) for j in range(1, m + 1))
        G.append(z * acc / (1 - z))
    return ComplexValue(math.factorial(n) * G[n], 1e-15 * math.factorial(n) * abs(G[n]) * (n + 1))


def hzn_asymptotic(k: int, x, t, N: int, beta=None) -> ComplexValue:
    """Truncated expansion of F_k at large |x| (|x| >= 1) or small |x| (|x| < 1)."""
    xc = as_complex(x)
    _check_x(xc)
    t = as_twist(t, beta)
    if t.beta.is_integral:
        raise DomainError("beta must be non-integral")
    if not 0 <= N <= 12:
        raise DomainError("N must lie in 0..12")
    a, b = t.alpha.alpha, t.beta.alpha
    if abs(xc) >= 1:
        tot = 0j
        for n in range(N + 1):
            tot += taylor_a(b, n).value * li_phase(k + n, a) / xc ** (n + 1)
        return ComplexValue(tot, 0.0)
    if t.alpha.is_integral:
        raise DomainError("small-x expansion needs non-integral alpha")
    tot = li_phase(k, a) / xc - (-xc) ** (k - 1) * li_phase(k, b)
    for r in range(1, k):
        tot += (-xc) ** (r - 1) * li_phase(k - r, a) * li_phase(r, b)
    for n in range(N + 1):
        tot += (-1) ** (k - 1) * taylor_a(a, n).value * li_phase(k + n, b) * xc ** (k + n - 1)
    return ComplexValue(tot, 0.0)


# ---------------------------------------------------------------- classical degenerations

def _b2m_coeffs(mmax=14):
    B = sc.bernoulli(2 * mmax)
    return [float(B[2 * m]) / (2 * m) for m in range(1, mmax + 1)]


def _psi_minus_log_tail(x: complex, N: int, shift: int) -> complex:
    """sum_{n>=N} (psi(nx) - log(nx)) n^{-shift} from the large-argument expansion."""
    tot = -0.5 / x * sc.zeta(1.0 + shift, N)
    for m, c in enumerate(_b2m_coeffs(), start=1):
        tot -= c / x ** (2 * m) * sc.zeta(2.0 * m + shift, N)
    return complex(tot)


def _n0(x: complex) -> int:
    d = abs(x) if x.real >= 0 else abs(x.imag)
    return max(30, int(math.ceil(30.0 / d)))


def herglotz_F(x) -> ComplexValue:
    """F(x) = sum_{n>=1} (psi(nx) - log(nx)) / n."""
    xc = as_complex(x)
    _check_x(xc)
    N = _n0(xc)
    n = np.arange(1, N, dtype=np.float64)
    y = n * xc
    head = compensated_sum((digamma_array(y) - np.log(y)) / n)
    v = head + _psi_minus_log_tail(xc, N, 1)
    if xc.imag == 0:
        v = complex(v.real, 0.0)
    return ComplexValue(v, 1e-14 * max(1.0, abs(v)))


def higher_herglotz_plain(k: int, x) -> ComplexValue:
    """F_k(x) = sum_{n>=1} psi(nx) / n^{k-1}, k >= 3."""
    if k < 3:
        raise DomainError("k must be >= 3")
    xc = as_complex(x)
    _check_x(xc)
    N = _n0(xc)
    n = np.arange(1, N, dtype=np.float64)
    y = n * xc
    head = compensated_sum((digamma_array(y) - np.log(y)) / n ** (k - 1))
    logs = np.log(xc) * zeta_int(k - 1) + log_power_tail(float(k - 1), 2)
    v = head + _psi_minus_log_tail(xc, N, k - 1) + logs
    if xc.imag == 0:
        v = complex(v.real, 0.0)
    return ComplexValue(v, 1e-14 * max(1.0, abs(v)))


# ---------------------------------------------------------------- D operator

def dop(n: int, f: Callable, x, y, t=None, method: str = "finite") -> ComplexValue:
    """The operator D_n applied to a function family f(i, x) (i-th derivative).

    When t is given, f is called as f(i, x, t).
    """
    xc, yc = as_complex(x), as_complex(y)
    if abs(xc - yc) < 1e-10:
        raise DegenerateArguments("x and y too close")
    g = (lambda i, u: f(i, u, t)) if t is not None else f
    if method == "finite":
        terms = []
        for i in range(n + 1):
            c = math.comb(2 * n - i, n) / math.factorial(i)
            terms.append(c * (complex(g(i, xc)) - (-1) ** i * complex(g(i, yc))) / (yc - xc) ** (n - i))
        v = compensated_sum(terms)
        return ComplexValue(v, 1e-15 * sum(abs(q) for q in terms))
    if method == "integral":
        d = xc - yc

        def integrand(tt):
            tt = np.asarray(tt)
            ker = ((xc - tt) * (tt - yc) / d) ** n
            return ker * np.asarray(g(2 * n + 1, tt), dtype=np.complex128)

        r = quad_panel(integrand, yc, xc, tol=1e-13)
        s = 1.0 / math.factorial(n) ** 2
        return ComplexValue(s * r.value, s * r.err)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------- cocycle

def cocycle_psi(weight: int, t, x, beta=None, route: str = "direct") -> ComplexValue:
    """sgn(x) sum' e(alpha p + beta q) / (p|x| + q)^weight, edges p = 0 or q = 0 halved.

    route="derivative" goes through the (weight-1)-st derivative of F_weight,
    which needs a non-integral beta:
        psi = -(d/dx)^{w-1} [F_w - Li_w(e(alpha))/(2x) - x^{w-1} Li_w(e(beta))/2] / (w-1)!
    """
    if weight % 2 or weight < 4:
        raise DomainError("weight must be even and >= 4")
    t = as_twist(t, beta)
    xr = float(np.real(as_complex(x)))
    if xr == 0:
        raise DomainError("x must be non-zero")
    a, b = t.alpha.alpha, t.beta.alpha
    ax = abs(xr)
    la, lb = li_phase(weight, a), li_phase(weight, b)
    if route == "direct":
        v, e = row_sum(weight, complex(ax), a, b, 0)
    elif route == "derivative":
        if t.beta.is_integral:
            raise DomainError("derivative route needs non-integral beta")
        d, e = f_series(weight, complex(ax), a, b, weight - 1)
        v = -d / math.factorial(weight - 1)
        e /= math.factorial(weight - 1)
    else:
        raise ValueError(f"unknown route {route!r}")
    v += -0.5 * la / ax ** weight + 0.5 * lb
    return ComplexValue(math.copysign(1.0, xr) * v, e)


S_MAT = ((0, -1), (1, 0))
U_MAT = ((1, -1), (1, 0))


def matmul(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def slash(F: Callable, weight: int, M, x: float, t: TwistPair):
    """(F|_w M)(x, t) = (cx+d)^{-w} F((ax+b)/(cx+d), t M^T) with twists mod 1."""
    (a, b), (c, d) = M
    den = c * x + d
    if abs(den) < 1e-10:
        raise PoleEncountered("cx + d vanishes")
    al, be = t.alpha, t.beta
    tw = TwistPair.of(0, 0)
    # (alpha, beta) M^T = (a alpha + b beta, c alpha + d beta)
    na = _combo(a, al, b, be)
    nb = _combo(c, al, d, be)
    tw = TwistPair(na, nb)
    return den ** (-weight) * complex(F(weight, tw, (a * x + b) / den))


def _combo(m, u, n, v):
    from .values import UnitPhase
    if u.exact is not None and v.exact is not None:
        return UnitPhase(0.0, m * u.exact + n * v.exact)
    return UnitPhase(m * u.alpha + n * v.alpha)


def period_residuals(weight: int, t, x, beta=None):
    """Residuals of psi|(I + (-I) + S + (-S)) and psi|(I + (-I) + U + (-U) + U^2 + (-U^2))."""
    t = as_twist(t, beta)
    x = float(x)
    I = ((1, 0), (0, 1))
    neg = lambda M: tuple(tuple(-e for e in row) for row in M)
    U2 = matmul(U_MAT, U_MAT)
    F = lambda w, tw, u: cocycle_psi(w, tw, u).value
    r1 = [slash(F, weight, M, x, t) for M in (I, neg(I), S_MAT, neg(S_MAT))]
    r2 = [slash(F, weight, M, x, t) for M in (I, neg(I), U_MAT, neg(U_MAT), U2, neg(U2))]
    e = 1e-13 * max(1.0, max(abs(v) for v in r1 + r2))
    return ComplexValue(compensated_sum(r1), e), ComplexValue(compensated_sum(r2), e)
